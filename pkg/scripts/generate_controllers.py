"""Regenerate the bundled controller FIS files from their programmatic builders."""
from pathlib import Path

from fuzzypend.controllers import build_mamdani_cart, build_mamdani_pole, build_sugeno
from fuzzypend.fis import write_fis

OUT = Path(__file__).resolve().parents[1] / "src" / "fuzzypend" / "controllers"

if __name__ == "__main__":
    for filename, system in (
        ("ts_default.fis", build_sugeno()),
        ("mamdani_pole.fis", build_mamdani_pole()),
        ("mamdani_cart.fis", build_mamdani_cart()),
    ):
        write_fis(OUT / filename, system)
        print(f"wrote {OUT / filename}")
