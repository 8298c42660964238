import os
from dotenv import load_dotenv

# Load environment variables from a .env file
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw.strip(), 0)
    except ValueError:
        print(f"⚠️  Ignoring malformed {name}={raw!r}; using {default}.")
        return default


def _bool_env(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in {"1", "true", "yes", "on"}


# --- Search Settings ---
THREADS = max(1, _int_env("KMARC_THREADS", 1))  # worker cap for frame search
BUDGET = _int_env("KMARC_BUDGET", 20_000_000)   # candidate collineations per search

# --- Reproducibility ---
SEED = _int_env("KMARC_SEED", 20240611)

# --- Logging ---
LOG_LEVEL = os.getenv("KMARC_LOG_LEVEL", "WARNING").strip().upper() or "WARNING"

# --- Tests ---
RUN_SLOW_TESTS = _bool_env("KMARC_SLOW_TESTS")
