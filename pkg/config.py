import logging
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


class Config:
    """Configuration for the usage checker."""

    # Checker Configuration
    DEFAULT_SEMIRING: str = os.getenv("LR_DEFAULT_SEMIRING", "lin01w")
    WORKERS: int = int(os.getenv("LR_WORKERS", "1"))

    # Law audit Configuration
    NAT_BOUND: int = int(os.getenv("LR_NAT_BOUND", "8"))
    NAT_SAMPLES: int = int(os.getenv("LR_NAT_SAMPLES", "1000"))
    SEED: int = int(os.getenv("LR_SEED", "0"))

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LR_LOG_LEVEL", "WARNING")

    # Server Configuration
    HOST: str = os.getenv("HOST", "0.0.0.0")
    PORT: int = int(os.getenv("PORT", "8000"))
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"

    @classmethod
    def color_enabled(cls) -> bool:
        """LR_COLOR is read per call so a caller can flip it at runtime."""
        return os.getenv("LR_COLOR", "1") != "0"

    @classmethod
    def validate(cls) -> bool:
        """Validate the configured semiring and numeric settings."""
        from usage_ops.semiring import SEMIRINGS

        problems = []
        if cls.DEFAULT_SEMIRING.lower() not in SEMIRINGS:
            problems.append("LR_DEFAULT_SEMIRING")
        for var, value in (("LR_WORKERS", cls.WORKERS), ("LR_NAT_SAMPLES", cls.NAT_SAMPLES)):
            if value < 1:
                problems.append(var)
        if cls.NAT_BOUND < 0:
            problems.append("LR_NAT_BOUND")

        if problems:
            print(f"Invalid environment variables: {', '.join(problems)}")
            return False

        return True


def setup_logging(level: str = None) -> None:
    """Configure the root logger once; later calls only adjust the level."""
    root = logging.getLogger()
    resolved = (level or Config.LOG_LEVEL).upper()
    if not root.handlers:
        logging.basicConfig(level=resolved, format=LOG_FORMAT)
    else:
        root.setLevel(resolved)
