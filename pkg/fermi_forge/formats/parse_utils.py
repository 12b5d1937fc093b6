import re
from typing import Union

Value = Union[int, float, str, tuple]


def text2lines(text: str) -> list[str]:
    """
    Takes a string and returns a list of non-empty, stripped lines. Also
    removes any comment lines from the given string.
    """
    return [
        stripped
        for line in text.splitlines()
        if (stripped := line.strip()) and not stripped.startswith("#")
    ]


def infer_type(s: str) -> Union[int, float, str]:
    try:
        return int(s)
    except ValueError:
        try:
            return float(s)
        except ValueError:
            return s


def parse_specification(line: str) -> tuple[str, Value]:
    """
    Parses a "KEY: VALUE" line as lowercase keyword and typed value. Values
    with several whitespace-separated tokens become tuples.
    """
    key, value = [x.strip() for x in re.split("\\s*:\\s*", line, maxsplit=1)]
    tokens = value.split()

    if len(tokens) > 1:
        return key.lower(), tuple(infer_type(token) for token in tokens)

    return key.lower(), infer_type(value)


def group_specifications_and_sections(lines: list[str]):
    """
    Groups lines into "KEY: VALUE" specifications and data sections. A
    section starts at a line ending in "_SECTION" and runs until the next
    section or the EOF token.
    """
    specs = []
    sections = []
    current = None

    for line in lines:
        if line == "EOF":
            break
        elif line.endswith("_SECTION"):
            current = [line]
            sections.append(current)
        elif ":" in line:
            if current is not None:
                raise ValueError("Specification presented after section.")
            specs.append(line)
        elif current is not None:
            current.append(line)
        else:
            msg = f"Line {line!r} is neither specification nor section."
            raise RuntimeError(msg)

    return specs, sections
