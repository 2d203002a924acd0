import hashlib
import typing as t
from pathlib import Path

DATA = Path(__file__).parent.parent / "data"


def builtin_scenario(name: str) -> Path:
    """The path of a scenario shipped with the package.

    >>> builtin_scenario("flat_rotation").name
    'flat_rotation.scn'
    """
    path = DATA / f"{name}.scn"
    if not path.exists():
        raise FileNotFoundError(
            f"No built-in scenario {name!r}. Known: {', '.join(builtin_names())}"
        )
    return path


def builtin_names() -> t.List[str]:
    return sorted(p.stem for p in DATA.glob("*.scn"))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def read_scenario_text(path: Path) -> str:
    if not path.exists():
        raise FileNotFoundError(f"Scenario file {path} does not exist")
    return path.read_text(encoding="utf-8")
