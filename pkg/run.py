#!/usr/bin/env python3
"""
Start the usage checker API with uvicorn.

Settings come from config.Config; an invalid LR_* variable stops startup.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def main() -> int:
    try:
        import uvicorn
        from config import Config, setup_logging
        from usage_ops.semiring import get_semiring
    except ImportError as e:
        print(f"❌ Import error: {e}")
        print("💡 Install the dependencies: pip install -r requirements.txt")
        return 1

    if not Config.validate():
        return 2
    setup_logging()

    sr = get_semiring(Config.DEFAULT_SEMIRING)
    print(f"🚀 Usage checker API, default semiring {sr.name} ({sr.description})")
    print(f"📡 http://{Config.HOST}:{Config.PORT}  (docs at /docs)")

    uvicorn.run(
        "api.main:app",
        host=Config.HOST,
        port=Config.PORT,
        reload=Config.DEBUG,
        log_level=Config.LOG_LEVEL.lower(),
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
