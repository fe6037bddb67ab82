from ._core import (
    Engine,
    canonical_domain,
    canonical_principal,
    decrypt_value,
    encrypt_value,
    generalize_numeric,
    mask_value,
    pseudonymize,
    trust_level,
)

__all__ = [
    "Engine",
    "canonical_domain",
    "canonical_principal",
    "decrypt_value",
    "encrypt_value",
    "generalize_numeric",
    "mask_value",
    "pseudonymize",
    "trust_level",
]
