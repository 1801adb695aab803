import os

from dotenv import load_dotenv

load_dotenv()

APP_CONFIG = {
    "name": "legendre-rip",
    "version": "0.1.0",
    "log_convention": "natural",
}

# Constantes de los teoremas (sin optimizar, tal como aparecen en los enunciados)
PLAN_CONFIG = {
    "c1": 5760000,
    "fro_to_rip": 150,
    "charsum_constant": 9,
    "bias_exponent": 40,
}

PRIME_CONFIG = {
    # Conjunto de testigos correcto para n < 2^64
    "deterministic_witnesses": (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37),
    "mr_rounds": max(64, int(os.getenv("PRIME_MR_ROUNDS", 64))),
    "table_limit": int(os.getenv("LEGENDRE_TABLE_LIMIT", 2 ** 26)),
    # La tabla se construye si count * table_ratio >= p
    "table_ratio": int(os.getenv("LEGENDRE_TABLE_RATIO", 16)),
}

VERIFY_CONFIG = {
    "support_budget": int(os.getenv("RIP_SUPPORT_BUDGET", 10 ** 6)),
    "bias_bits_budget": int(os.getenv("RIP_BIAS_BITS", 24)),
    "eig_tolerance": 1e-10,
    "significant_digits": 12,
    "charsum_soft_below": 10 ** 4,
    "workers": int(os.getenv("RIP_WORKERS", 1)),
    "chunk_size": 4096,
}

RECOVERY_CONFIG = {
    "max_condition": 1e12,
    "exact_tolerance": 1e-8,
}

DB_CONFIG = {
    "url": os.getenv("DB_URL", "sqlite:///legendre_rip.db"),
    "echo": os.getenv("DB_ECHO", "0") == "1",
}

LOG_CONFIG = {
    "level": os.getenv("LOG_LEVEL", "INFO"),
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "file": os.getenv("LOG_FILE", "legendre_rip.log"),
}
