"""Reading and writing fuzzy systems in the plain-text ``.fis`` format.

The accepted grammar is documented in ``docs/fis-grammar.md``. ``serialize_fis``
emits a canonical normal form: fixed section and key order, shortest
round-trip floats, LF line endings.
"""
from __future__ import annotations

import re
from pathlib import Path

from .core import (
    AGG_METHODS,
    AND_METHODS,
    DEFUZZ_METHODS,
    IMP_METHODS,
    OR_METHODS,
    FuzzyError,
    InferenceConfig,
    LinguisticVariable,
    MamdaniSystem,
    Rule,
    SugenoSystem,
)
from .membership import CONSEQUENTS, SHAPES, from_params


class FisError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class FisSyntaxError(FisError):
    """A line that does not fit the grammar."""


class FisValidationError(FisError):
    """Well-formed text describing an invalid system."""


_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_SECTION = re.compile(r"\[(System|Input(\d{1,6})|Output(\d{1,6})|Rules)\]")
_KEYVAL = re.compile(r"([A-Za-z][A-Za-z0-9]*)\s*=\s*(.*)")
_STRING = re.compile(r"'([^']*)'")
_INT = re.compile(r"\d{1,18}")
_NUMBER = re.compile(_NUM)
_RANGE = re.compile(rf"\[\s*({_NUM})\s+({_NUM})\s*\]")
_MF_KEY = re.compile(r"MF(\d{1,6})")
_MF = re.compile(rf"'([^']*)'\s*:\s*'([^']*)'\s*,\s*\[\s*((?:{_NUM}(?:\s+{_NUM})*)?)\s*\]")
_RULE = re.compile(
    r"(-?\d{1,18}(?:\s+-?\d{1,18})*)\s*,\s*(-?\d{1,18}(?:\s+-?\d{1,18})*)\s*\(\s*(" + _NUM + r")\s*\)\s*:\s*(\d{1,18})"
)

_SYSTEM_KEYS = {
    "Name": "str",
    "Type": "str",
    "Version": "num",
    "NumInputs": "int",
    "NumOutputs": "int",
    "NumRules": "int",
    "AndMethod": "str",
    "OrMethod": "str",
    "ImpMethod": "str",
    "AggMethod": "str",
    "DefuzzMethod": "str",
    "Resolution": "int",
}
_VAR_KEYS = {"Name": "str", "Range": "range", "NumMFs": "int"}
_SUGENO_FIXED = {"ImpMethod": "prod", "AggMethod": "sum", "DefuzzMethod": "wtaver"}
_CONNECTIVE = {1: "and", 2: "or"}


def format_float(value: float) -> str:
    """Shortest round-trip text for ``value``; integral values drop the ``.0``."""
    value = float(value)
    if value == 0:
        return "0"
    text = repr(value)
    return text[:-2] if text.endswith(".0") else text


def _num(text: str, line: int) -> float:
    if not _NUMBER.fullmatch(text):
        raise FisSyntaxError(line, f"expected a number, got {text!r}")
    value = float(text)
    if value in (float("inf"), float("-inf")):
        raise FisValidationError(line, f"number {text!r} overflows")
    return value


def _value(kind: str, raw: str, key: str, line: int):
    if kind == "str":
        m = _STRING.fullmatch(raw)
        if not m:
            raise FisSyntaxError(line, f"{key}: expected a quoted string, got {raw!r}")
        return m.group(1)
    if kind == "int":
        if not _INT.fullmatch(raw):
            raise FisSyntaxError(line, f"{key}: expected a non-negative integer, got {raw!r}")
        return int(raw)
    if kind == "num":
        return _num(raw, line)
    m = _RANGE.fullmatch(raw)
    if not m:
        raise FisSyntaxError(line, f"{key}: expected [lo hi], got {raw!r}")
    return (_num(m.group(1), line), _num(m.group(2), line))


class _Section:
    def __init__(self, header: str, line: int):
        self.header = header
        self.line = line
        self.keys: dict[str, tuple[object, int]] = {}
        self.mfs: dict[int, tuple[str, str, list[float], int]] = {}
        self.rules: list[tuple[list[int], list[int], float, int, int]] = []

    def need(self, key: str):
        if key not in self.keys:
            raise FisValidationError(self.line, f"[{self.header}] is missing {key}")
        return self.keys[key]


def _decode(text) -> str:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as e:
            line = bytes(text)[: e.start].count(b"\n") + 1
            raise FisSyntaxError(line, "document is not ASCII") from None
    for k, ch in enumerate(text):
        if ord(ch) > 127:
            raise FisSyntaxError(text[:k].count("\n") + 1, f"non-ASCII character {ch!r}")
    return text.replace("\r\n", "\n").replace("\r", "\n")


def _scan(text: str) -> list[_Section]:
    sections: list[_Section] = []
    current = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line[0] in "%#":
            continue
        if line.startswith("["):
            m = _SECTION.fullmatch(line)
            if not m:
                raise FisSyntaxError(lineno, f"unknown section header {line!r}")
            if any(s.header == m.group(1) for s in sections):
                raise FisSyntaxError(lineno, f"duplicate section [{m.group(1)}]")
            current = _Section(m.group(1), lineno)
            sections.append(current)
            continue
        if current is None:
            raise FisSyntaxError(lineno, "content before the first section header")
        if current.header == "Rules":
            current.rules.append(_rule_line(line, lineno))
            continue
        m = _KEYVAL.fullmatch(line)
        if not m:
            raise FisSyntaxError(lineno, f"expected Key=value, got {line!r}")
        key, raw_value = m.group(1), m.group(2).strip()
        mf_key = _MF_KEY.fullmatch(key)
        if current.header != "System" and mf_key:
            k = int(mf_key.group(1))
            if k in current.mfs:
                raise FisSyntaxError(lineno, f"duplicate MF{k}")
            mm = _MF.fullmatch(raw_value)
            if not mm:
                raise FisSyntaxError(lineno, f"MF{k}: expected 'name':'type',[params], got {raw_value!r}")
            params = [_num(p, lineno) for p in mm.group(3).split()]
            current.mfs[k] = (mm.group(1), mm.group(2), params, lineno)
            continue
        allowed = _SYSTEM_KEYS if current.header == "System" else _VAR_KEYS
        if key not in allowed:
            raise FisSyntaxError(lineno, f"unknown key {key!r} in [{current.header}]")
        if key in current.keys:
            raise FisSyntaxError(lineno, f"duplicate key {key!r}")
        current.keys[key] = (_value(allowed[key], raw_value, key, lineno), lineno)
    return sections


def _rule_line(line: str, lineno: int):
    m = _RULE.fullmatch(line)
    if not m:
        raise FisSyntaxError(lineno, f"malformed rule {line!r}; expected 'i1 i2 ..., o1 ... (weight) : connective'")
    ante = [int(v) for v in m.group(1).split()]
    cons = [int(v) for v in m.group(2).split()]
    return ante, cons, _num(m.group(3), lineno), int(m.group(4)), lineno


def _variable(section: _Section):
    name, _ = section.need("Name")
    (lo, hi), range_line = section.need("Range")
    if not lo < hi:
        raise FisValidationError(range_line, f"[{section.header}] Range: lo must be < hi, got [{format_float(lo)} {format_float(hi)}]")
    n_mfs, n_line = section.need("NumMFs")
    if sorted(section.mfs) != list(range(1, len(section.mfs) + 1)):
        raise FisValidationError(section.line, f"[{section.header}] MF numbering must run 1..N without gaps")
    if n_mfs != len(section.mfs):
        raise FisValidationError(n_line, f"[{section.header}] NumMFs={n_mfs} but {len(section.mfs)} MFs defined")
    if n_mfs == 0:
        raise FisValidationError(n_line, f"[{section.header}] needs at least one MF")
    terms = []
    for k in range(1, n_mfs + 1):
        term, kind, params, line = section.mfs[k]
        try:
            terms.append((term, from_params(kind, params)))
        except ValueError as e:
            raise FisValidationError(line, f"[{section.header}] MF{k}: {e}") from None
    try:
        return LinguisticVariable(name, (lo, hi), terms), n_mfs
    except FuzzyError as e:
        raise FisValidationError(section.line, f"[{section.header}] {e}") from None


def parse_fis(text: str | bytes) -> MamdaniSystem | SugenoSystem:
    """Parse and validate a FIS document.

    Raises :class:`FisSyntaxError` or :class:`FisValidationError`; both carry
    the offending line number.
    """
    sections = _scan(_decode(text))
    by_header = {s.header: s for s in sections}
    if "System" not in by_header:
        raise FisValidationError(1, "missing [System] section")
    system = by_header["System"]
    name, _ = system.need("Name")
    kind, type_line = system.need("Type")
    if kind not in ("mamdani", "sugeno"):
        raise FisValidationError(type_line, f"Type must be 'mamdani' or 'sugeno', got {kind!r}")

    def count(key: str, prefix: str) -> int:
        n, line = system.need(key)
        found = sorted(int(s.header[len(prefix):]) for s in sections if s.header.startswith(prefix))
        if found != list(range(1, len(found) + 1)):
            raise FisValidationError(line, f"[{prefix}k] sections must be numbered 1..N without gaps")
        if n != len(found):
            raise FisValidationError(line, f"{key}={n} but {len(found)} [{prefix}k] sections present")
        return n

    n_in = count("NumInputs", "Input")
    n_out = count("NumOutputs", "Output")
    if n_in == 0 or n_out == 0:
        raise FisValidationError(system.line, "a system needs at least one input and one output")
    inputs = [_variable(by_header[f"Input{k}"]) for k in range(1, n_in + 1)]
    outputs = [_variable(by_header[f"Output{k}"]) for k in range(1, n_out + 1)]

    for header, (var, _) in zip([f"Input{k}" for k in range(1, n_in + 1)], inputs):
        for term, mf in var.terms:
            if not isinstance(mf, SHAPES):
                raise FisValidationError(by_header[header].line, f"[{header}] MF {term!r}: inputs need trimf/trapmf/gaussmf")

    n_rules, rules_key_line = system.need("NumRules")
    if "Rules" not in by_header:
        raise FisValidationError(system.line, "missing [Rules] section")
    raw_rules = by_header["Rules"].rules
    if n_rules != len(raw_rules):
        raise FisValidationError(rules_key_line, f"NumRules={n_rules} but {len(raw_rules)} rules present")
    if n_rules == 0:
        raise FisValidationError(rules_key_line, "rule base is empty")

    rules = []
    for ante, cons, weight, conn, line in raw_rules:
        if len(ante) != n_in or len(cons) != n_out:
            raise FisValidationError(line, f"rule needs {n_in} antecedent and {n_out} consequent indices")
        if any(i < 0 for i in ante + cons):
            raise FisValidationError(line, "negative indices (NOT hedges) are not supported")
        for idx, (var, n_terms) in zip(ante + cons, inputs + outputs):
            if idx > n_terms:
                raise FisValidationError(line, f"term index {idx} out of range for {var.name!r} ({n_terms} terms)")
        if conn not in _CONNECTIVE:
            raise FisValidationError(line, f"connective must be 1 (AND) or 2 (OR), got {conn}")
        try:
            rules.append(Rule(tuple(ante), tuple(cons), weight, _CONNECTIVE[conn]))
        except FuzzyError as e:
            raise FisValidationError(line, str(e)) from None

    def method(key: str, default: str, allowed) -> str:
        if key not in system.keys:
            return default
        value, line = system.keys[key]
        if value not in allowed:
            raise FisValidationError(line, f"{key} must be one of {list(allowed)}, got {value!r}")
        return value

    in_vars = [v for v, _ in inputs]
    out_vars = [v for v, _ in outputs]
    if kind == "mamdani":
        for k, var in enumerate(out_vars, 1):
            for term, mf in var.terms:
                if not isinstance(mf, SHAPES):
                    raise FisValidationError(by_header[f"Output{k}"].line, f"[Output{k}] MF {term!r}: Mamdani outputs need shape MFs")
        if "Resolution" in system.keys:
            resolution, res_line = system.keys["Resolution"]
            if resolution < 3:
                raise FisValidationError(res_line, f"Resolution must be >= 3, got {resolution}")
        else:
            resolution = 1001
        config = InferenceConfig(
            and_method=method("AndMethod", "min", AND_METHODS),
            or_method=method("OrMethod", "max", OR_METHODS),
            implication=method("ImpMethod", "min", IMP_METHODS),
            aggregation=method("AggMethod", "max", AGG_METHODS),
            defuzzification=method("DefuzzMethod", "centroid", DEFUZZ_METHODS),
            resolution=resolution,
        )
        try:
            return MamdaniSystem(in_vars, out_vars, rules, config, name)
        except FuzzyError as e:
            raise FisValidationError(system.line, str(e)) from None

    if n_out != 1:
        raise FisValidationError(system.keys["NumOutputs"][1], "Sugeno systems must have exactly one output")
    for key, fixed in _SUGENO_FIXED.items():
        method(key, fixed, (fixed,))
    if "Resolution" in system.keys:
        raise FisValidationError(system.keys["Resolution"][1], "Resolution does not apply to Sugeno systems")
    out_section = by_header["Output1"]
    for k, (term, fn) in enumerate(out_vars[0].terms, 1):
        line = out_section.mfs[k][3]
        if not isinstance(fn, CONSEQUENTS):
            raise FisValidationError(line, f"[Output1] MF{k}: Sugeno outputs need linear/constant MFs, got {fn.kind}")
        if fn.kind == "linear" and len(fn.params) != n_in + 1:
            raise FisValidationError(line, f"[Output1] MF{k}: linear needs {n_in + 1} coefficients, got {len(fn.params)}")
    try:
        return SugenoSystem(
            in_vars,
            out_vars[0],
            rules,
            and_method=method("AndMethod", "prod", AND_METHODS),
            or_method=method("OrMethod", "max", OR_METHODS),
            name=name,
        )
    except FuzzyError as e:
        raise FisValidationError(system.line, str(e)) from None


def _quoted(text: str) -> str:
    if "'" in text or "\n" in text or "\r" in text or not text.isascii():
        raise ValueError(f"name {text!r} cannot be written to a FIS file")
    return f"'{text}'"


def _variable_block(header: str, var: LinguisticVariable) -> list[str]:
    lo, hi = var.universe
    lines = [
        f"[{header}]",
        f"Name={_quoted(var.name)}",
        f"Range=[{format_float(lo)} {format_float(hi)}]",
        f"NumMFs={len(var.terms)}",
    ]
    for k, (term, mf) in enumerate(var.terms, 1):
        params = " ".join(format_float(p) for p in mf.params)
        lines.append(f"MF{k}={_quoted(term)}:'{mf.kind}',[{params}]")
    return lines


def serialize_fis(system: MamdaniSystem | SugenoSystem) -> str:
    """Canonical FIS text for ``system``."""
    mamdani = system.kind == "mamdani"
    cfg = system.config
    lines = [
        "[System]",
        f"Name={_quoted(system.name)}",
        f"Type='{system.kind}'",
        "Version=2.0",
        f"NumInputs={len(system.inputs)}",
        f"NumOutputs={len(system.outputs)}",
        f"NumRules={len(system.rules)}",
        f"AndMethod='{cfg.and_method}'",
        f"OrMethod='{cfg.or_method}'",
    ]
    if mamdani:
        lines += [
            f"ImpMethod='{cfg.implication}'",
            f"AggMethod='{cfg.aggregation}'",
            f"DefuzzMethod='{cfg.defuzzification}'",
            f"Resolution={cfg.resolution}",
        ]
    else:
        lines += [f"{k}='{v}'" for k, v in _SUGENO_FIXED.items()]
    for k, var in enumerate(system.inputs, 1):
        lines += ["", *_variable_block(f"Input{k}", var)]
    for k, var in enumerate(system.outputs, 1):
        lines += ["", *_variable_block(f"Output{k}", var)]
    lines += ["", "[Rules]"]
    for rule in system.rules:
        ante = " ".join(str(i) for i in rule.antecedent)
        cons = " ".join(str(i) for i in rule.consequent)
        conn = 1 if rule.connective == "and" else 2
        lines.append(f"{ante}, {cons} ({format_float(rule.weight)}) : {conn}")
    return "\n".join(lines) + "\n"


def read_fis(path) -> MamdaniSystem | SugenoSystem:
    return parse_fis(Path(path).read_bytes())


def write_fis(path, system) -> None:
    Path(path).write_text(serialize_fis(system), encoding="ascii", newline="\n")
