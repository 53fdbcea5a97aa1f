"""Console entry point for twistlab."""

try:
    from services.twist.twist_app.cli import main
except ModuleNotFoundError:  # pragma: no cover - service-local fallback
    from twist_app.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
