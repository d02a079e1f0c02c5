import hashlib

from pydantic import BaseModel

def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

def model_hash(model: BaseModel) -> str:
    """Stable hash of a pydantic model's JSON dump."""
    return sha256_hex(model.model_dump_json().encode("utf-8"))
