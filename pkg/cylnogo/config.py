"""
cylnogo/config.py

Runtime configuration. Environment variables are loaded from a .env file;
canonical check inputs come from a versioned manifest JSON validated with
pydantic. CYLNOGO_MANIFEST points at a replacement manifest.
"""

import json
import logging
import os
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from cylnogo.errors import ConfigError
from cylnogo.parsing import parse_scalar

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()

DEFAULT_MANIFEST = os.path.join(os.path.dirname(os.path.abspath(__file__)), "manifest.json")
LOG_LEVEL = os.getenv("CYLNOGO_LOG_LEVEL", "INFO").upper()
API_HOST = os.getenv("CYLNOGO_API_HOST", "0.0.0.0")
API_PORT = int(os.getenv("CYLNOGO_API_PORT", "8000"))
ALLOWED_ORIGINS = [
    origin.strip()
    for origin in os.getenv("CYLNOGO_ALLOWED_ORIGINS", "http://localhost:3000").split(",")
    if origin.strip()
]


def default_jobs() -> int:
    value = os.getenv("CYLNOGO_JOBS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise ConfigError(f"CYLNOGO_JOBS must be an integer, got '{value}'")
    return os.cpu_count() or 1


def manifest_path() -> str:
    return os.getenv("CYLNOGO_MANIFEST") or DEFAULT_MANIFEST


class CheckDefaults(BaseModel):
    """Canonical inputs of one check: parameter bindings and free-form options."""

    bindings: Dict[str, str] = Field(default_factory=dict)
    options: Dict[str, Any] = Field(default_factory=dict)


class Manifest(BaseModel):
    version: str
    seed: int = 0
    checks: Dict[str, CheckDefaults] = Field(default_factory=dict)

    def defaults(self, name: str) -> CheckDefaults:
        return self.checks.get(name, CheckDefaults())


def load_manifest(path: Optional[str] = None) -> Manifest:
    path = path or manifest_path()
    try:
        with open(path, "r") as f:
            data = json.load(f)
        manifest = Manifest.parse_obj(data)
    except FileNotFoundError:
        logger.error(f"Manifest not found: {path}")
        raise ConfigError(f"manifest not found: {path}")
    except (json.JSONDecodeError, ValidationError) as e:
        logger.error(f"Invalid manifest {path}: {str(e)}")
        raise ConfigError(f"invalid manifest {path}: {e}")
    logger.debug(f"Loaded manifest {path} version {manifest.version}")
    return manifest


def parse_binding(text):
    """'formal' (or None) leaves a parameter formal; anything else is an exact scalar."""
    if text is None:
        return None
    text = str(text).strip()
    if text == "formal":
        return None
    try:
        return parse_scalar(text)
    except ValueError as e:
        raise ConfigError(f"invalid parameter value '{text}': {e}")


def parse_bindings(bindings: Dict[str, str]) -> Dict[str, Any]:
    return {name: parse_binding(value) for name, value in bindings.items()}
