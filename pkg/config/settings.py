"""
Global settings and configuration for hqdisk.
This centralizes every numeric default used by the command line and the experiments.
"""

import os
import json
import logging

# Application Information
APP_NAME = "hqdisk"
APP_VERSION = "1.0.0"

# Paths and Files
HOME_DIR = os.path.expanduser("~")
CONFIG_DIR = os.path.join(HOME_DIR, ".hqdisk")
CONFIG_FILE = os.path.join(CONFIG_DIR, "config.json")
LOG_DIR = os.path.join(CONFIG_DIR, "logs")

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


# Logging Configuration
def setup_logging(name=None, level=logging.INFO, log_dir=None):
    """Configure logging with consistent format"""
    from datetime import datetime

    handlers = [logging.StreamHandler()]
    log_dir = log_dir or LOG_DIR
    try:
        os.makedirs(log_dir, exist_ok=True)
        log_file = os.path.join(log_dir, f"{name or 'hqdisk'}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log")
        handlers.append(logging.FileHandler(log_file))
    except OSError as e:
        # Read-only home directories still get console logging
        logging.getLogger(__name__).warning(f"File logging disabled: {str(e)}")

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers)
    return logging.getLogger(name or __name__)


# Default Configuration
DEFAULT_CONFIG = {
    # Poisson quadrature
    "nodes": 8192,
    "r_max": 0.99,
    "flatness_floor": 1e-6,
    # Principal-value quadrature for the Hilbert transformation
    "eps": 1e-6,
    "pv_nodes": 8192,
    "kernel": "tan",
    # Sampling of lifts
    "mesh": 4096,
    "lipschitz_mesh": 32768,
    "hilbert_samples": 128,
    # Dilatation sweeps
    "radii": [0.5, 0.75, 0.9, 0.95, 0.99],
    "angles": 1024,
    # Experiments
    "nmax": 6,
    "trials": 100,
    "seed": 42,
    "out": "hqdisk_out",
    "format": "csv",
}


def load_config():
    """Load configuration from file with fallback to defaults"""
    if os.path.exists(CONFIG_FILE):
        try:
            with open(CONFIG_FILE, 'r') as f:
                user_config = json.load(f)
                # Merge with defaults to ensure all keys exist
                config = DEFAULT_CONFIG.copy()
                config.update(user_config)
                return config
        except Exception as e:
            logging.error(f"Error loading config: {str(e)}")

    # If file doesn't exist or has error, create with defaults
    save_config(DEFAULT_CONFIG)
    return DEFAULT_CONFIG.copy()


def save_config(config):
    """Save configuration to file"""
    try:
        os.makedirs(os.path.dirname(CONFIG_FILE), exist_ok=True)
        with open(CONFIG_FILE, 'w') as f:
            json.dump(config, f, indent=2, sort_keys=True)
        return True
    except Exception as e:
        logging.error(f"Error saving config: {str(e)}")
        return False
