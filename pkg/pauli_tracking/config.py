"""
Runtime settings for the Pauli tracking tools.

Values come from environment variables, optionally loaded from a ``.env``
file. See ``.env.template`` for the full list.
"""

import logging
import os
import sys
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

ENV_KEYS = {
    "PAULI_RESULTS_DIR": "Directory for verify/bench artifacts",
    "PAULI_LOG_LEVEL": "Diagnostics level (DEBUG, INFO, WARNING, ERROR)",
    "PAULI_SIM_MAX_QUBITS": "Simulator capacity in logical qubits",
    "PAULI_TOLERANCE": "Default tolerance for phase-insensitive state comparison",
    "PAULI_ORACLE_SEED": "Seed for the oracle's probe states",
}


@dataclass(frozen=True)
class Settings:
    """Resolved configuration"""
    results_dir: str = "results"
    log_level: str = "WARNING"
    sim_max_qubits: int = 14
    tolerance: float = 1e-9
    oracle_seed: int = 2013


def load_settings() -> Settings:
    """Read settings from the environment, falling back to defaults"""
    defaults = Settings()
    return Settings(
        results_dir=os.getenv("PAULI_RESULTS_DIR", defaults.results_dir),
        log_level=os.getenv("PAULI_LOG_LEVEL", defaults.log_level).upper(),
        sim_max_qubits=int(os.getenv("PAULI_SIM_MAX_QUBITS", defaults.sim_max_qubits)),
        tolerance=float(os.getenv("PAULI_TOLERANCE", defaults.tolerance)),
        oracle_seed=int(os.getenv("PAULI_ORACLE_SEED", defaults.oracle_seed)),
    )


def configure_logging(level: str = "WARNING") -> None:
    """Send library diagnostics to stderr; stdout is reserved for reports"""
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def create_env_template(path: str = ".env.template") -> str:
    """Write a template .env file listing every recognised key"""
    defaults = Settings()
    values = {
        "PAULI_RESULTS_DIR": defaults.results_dir,
        "PAULI_LOG_LEVEL": defaults.log_level,
        "PAULI_SIM_MAX_QUBITS": defaults.sim_max_qubits,
        "PAULI_TOLERANCE": defaults.tolerance,
        "PAULI_ORACLE_SEED": defaults.oracle_seed,
    }
    lines = []
    for key, description in ENV_KEYS.items():
        lines.append(f"# {description}")
        lines.append(f"{key}={values[key]}")
    template = "\n".join(lines) + "\n"
    with open(path, "w") as f:
        f.write(template)
    return template
