"""Check results and relative-error bookkeeping shared by the verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


def rel_err(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| scaled by the larger magnitude (floor guards 0 = 0)."""
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


@dataclass(frozen=True)
class CheckResult:
    name: str
    lhs: complex
    rhs: complex
    err: float
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        def _num(z: complex):
            z = complex(z)
            return z.real if z.imag == 0.0 else {"re": z.real, "im": z.imag}
        d = {"name": self.name, "lhs": _num(self.lhs), "rhs": _num(self.rhs),
             "rel_err": self.err, "pass": self.passed}
        if self.note:
            d["note"] = self.note
        return d


def check(name: str, lhs: complex, rhs: complex, tol: float,
          absolute: bool = False, note: str = "") -> CheckResult:
    """Build a CheckResult; `absolute` compares |lhs - rhs| directly instead
    of relatively (for identities whose exact value is 0)."""
    err = abs(lhs - rhs) if absolute else rel_err(lhs, rhs)
    return CheckResult(name=name, lhs=complex(lhs), rhs=complex(rhs),
                       err=err, passed=(err <= tol), note=note)


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {"checks": [c.to_dict() for c in self.checks],
               "pass": self.passed}
        if self.constants:
            out["constants"] = {
                k: (v if not isinstance(v, complex)
                    else {"re": v.real, "im": v.imag})
                for k, v in self.constants.items()}
        return out
