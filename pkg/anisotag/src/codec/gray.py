from anisotag.core.exceptions import CodecRangeError

Bits = list[int]

def _check_range(value: int, m: int) -> None:
    if m <= 0:
        raise CodecRangeError(f"bit count must be positive, got {m}")
    if not 0 <= value < (1 << m):
        raise CodecRangeError(f"value {value} outside [0, {1 << m})")

def binary_encode(value: int, m: int) -> Bits:
    """MSB-first plain binary."""
    _check_range(value, m)
    return [(value >> shift) & 1 for shift in range(m - 1, -1, -1)]

def binary_decode(bits: Bits) -> int:
    value = 0
    for bit in bits:
        value = (value << 1) | (bit & 1)
    return value

def gray_encode(value: int, m: int) -> Bits:
    """Reflected binary Gray code of value, MSB first."""
    _check_range(value, m)
    return binary_encode(value ^ (value >> 1), m)

def gray_decode(bits: Bits) -> int:
    if not bits:
        raise CodecRangeError("cannot decode an empty bit sequence")
    value = 0
    acc = 0
    for bit in bits:
        acc ^= bit & 1
        value = (value << 1) | acc
    return value

def bits_from_string(text: str) -> Bits:
    cleaned = "".join(text.split())
    if any(ch not in "01" for ch in cleaned):
        raise CodecRangeError(f"payload must contain only 0 and 1, got {text!r}")
    return [int(ch) for ch in cleaned]

def bits_to_string(bits: Bits) -> str:
    return "".join(str(bit) for bit in bits)

def hamming(a: Bits, b: Bits) -> int:
    return sum(x != y for x, y in zip(a, b, strict=True))
