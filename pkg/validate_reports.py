"""
Cross-validation: analytic minimal times against the brute-force oracle.

This script:
1. Searches the composite family for ground(H_-gamma) -> ground(H_+gamma)
   and compares with tan(omega T_min) = gamma/omega
2. Searches the symmetric and asymmetric three-segment families and
   compares with the bang-off-bang / bang-bang minimal time (when c is set)
3. Propagates every analytic protocol and checks its fidelity
4. Checks the switching-ramp fidelity bound (when epsilon is set)
5. Checks convergence of finite sigma3 pulses to delta pulses
6. Prints a pass/fail table
"""

import math
import sys
from typing import Dict, List, Optional, TextIO

import pandas as pd

from analytic import pulse_areas, tmin_constrained, tmin_ground_to_ground
from config import (
    DELTA_LIMIT_GRID,
    EXIT_OK,
    EXIT_VERIFY,
    PROTOCOL_FIDELITY_TOL,
    SWEEP_GAMMA_OVER_OMEGA,
    VERIFY_COORDINATE_TOL,
    VERIFY_ORACLE_THRESHOLD,
    VERIFY_RELATIVE_TOL,
)
from dynamics import propagate_protocol
from oracle import SearchFamily, SearchSpec, search_min_time, verify_delta_limit
from protocol import apply_switching, build_composite, build_constrained
from states import LzParams, fidelity


class ResultValidator:
    """Runs the analytic-vs-oracle checks for one parameter set."""

    def __init__(
        self,
        gamma: float,
        omega: float = 1.0,
        c: Optional[float] = None,
        epsilon: Optional[float] = None,
        stream: Optional[TextIO] = None,
    ):
        self.params = LzParams(gamma=gamma, omega=omega, c=c, epsilon=epsilon)
        self.stream = stream if stream is not None else sys.stderr
        self.checks: List[Dict] = []
        self.warnings: List[str] = []

    def _print(self, text: str = "") -> None:
        print(text, file=self.stream)

    def _record(self, name: str, expected: float, observed: float, tolerance: float, passed: bool) -> None:
        self.checks.append({
            "check": name,
            "expected": expected,
            "observed": observed,
            "tolerance": tolerance,
            "passed": bool(passed),
        })
        mark = "✓" if passed else "❌"
        self._print(f"  {mark} {name}: expected {expected:.12g}, observed {observed:.12g} (tol {tolerance:.1e})")

    def _relative_check(self, name: str, expected: float, observed: Optional[float]) -> None:
        if observed is None:
            self.warnings.append(f"{name}: oracle did not reach the threshold")
            self._record(name, expected, math.nan, VERIFY_RELATIVE_TOL, False)
            return
        error = abs(observed - expected) / max(abs(expected), 1e-300)
        self._record(name, expected, observed, VERIFY_RELATIVE_TOL, error <= VERIFY_RELATIVE_TOL)

    def check_composite(self) -> None:
        """Oracle over the composite family vs tan(omega T_min) = gamma/omega."""
        self._print("\n🔍 Unconstrained driving (composite family)")
        p = self.params
        expected = tmin_ground_to_ground(p.gamma, p.omega)
        spec = SearchSpec(SearchFamily.COMPOSITE, threshold=VERIFY_ORACLE_THRESHOLD)
        result = search_min_time(spec, p.initial_ground(), p.final_ground(), p)
        self._relative_check("composite oracle T_min", expected, result.duration)

    def check_constrained(self) -> None:
        """Symmetric and asymmetric three-segment oracle vs the closed form."""
        p = self.params
        if p.c is None:
            return
        self._print(f"\n🔍 Constrained driving |Gamma| <= {p.c:g}")
        analytic = tmin_constrained(p.gamma, p.omega, p.c)
        self._print(f"  Regime: {analytic.regime.value}")

        for symmetric in (True, False):
            spec = SearchSpec(SearchFamily.THREE_SEGMENT, symmetric=symmetric, threshold=VERIFY_ORACLE_THRESHOLD)
            result = search_min_time(spec, p.initial_ground(), p.final_ground(), p)
            label = "symmetric" if symmetric else "asymmetric"
            self._relative_check(f"{label} three-segment oracle T_min", analytic.t_min, result.duration)
            if not symmetric and result.reached:
                t_c = result.coordinates["t_c"]
                t_mc = result.coordinates["t_minus_c"]
                self._record("asymmetric search T_-c vs T_c", t_c, t_mc,
                             VERIFY_COORDINATE_TOL, abs(t_mc - t_c) <= VERIFY_COORDINATE_TOL * max(t_c, 1.0))

    def check_protocols(self) -> None:
        """Exact propagation of the analytic protocols."""
        self._print("\n🔍 Analytic protocol fidelity")
        p = self.params
        initial, final = p.initial_ground(), p.final_ground()

        areas = pulse_areas(initial, final, p.omega)
        protocols = {"composite": build_composite(areas.alpha_in, areas.alpha_f, p.omega, areas.t_min)}
        if p.c is not None:
            protocols[tmin_constrained(p.gamma, p.omega, p.c).regime.value] = build_constrained(p.gamma, p.omega, p.c)

        for name, proto in protocols.items():
            achieved = fidelity(propagate_protocol(proto, initial), final)
            self._record(f"{name} protocol fidelity", 1.0, achieved,
                         PROTOCOL_FIDELITY_TOL, achieved >= 1.0 - PROTOCOL_FIDELITY_TOL)

    def check_switching(self) -> None:
        """F > 1 - 2(omega eps + c eps) for ramped protocols."""
        p = self.params
        if p.c is None or not p.epsilon:
            return
        self._print(f"\n🔍 Switching ramps epsilon = {p.epsilon:g}")
        initial, final = p.initial_ground(), p.final_ground()
        bound = 1.0 - 2.0 * (p.omega * p.epsilon + p.c * p.epsilon)
        base = build_constrained(p.gamma, p.omega, p.c)
        for corrected in (False, True):
            try:
                ramped = apply_switching(base, p.epsilon, corrected)
            except ValueError as exc:
                self.warnings.append(str(exc))
                continue
            achieved = fidelity(propagate_protocol(ramped, initial), final)
            label = "corrected" if corrected else "uncorrected"
            self._record(f"{label} ramp fidelity bound", bound, achieved, 0.0, achieved > bound)

    def check_delta_limit(self) -> None:
        self._print("\n🔍 Delta-pulse limit")
        report = verify_delta_limit(math.pi / 4.0, self.params.omega, DELTA_LIMIT_GRID, strict=False)
        for ratio, error in zip(DELTA_LIMIT_GRID, report.errors):
            self._print(f"  Gamma/omega = {ratio:g}: operator-norm error {error:.3e}")
        self._record("delta-limit errors strictly decreasing", 1.0, float(report.decreasing), 0.0, report.decreasing)

    def validate_all(self) -> Dict:
        self._print(f"\n{'=' * 80}")
        self._print(f"🔍 VERIFYING gamma/omega = {self.params.gamma / self.params.omega:g}")
        self._print(f"{'=' * 80}")

        self.check_composite()
        self.check_constrained()
        self.check_protocols()
        self.check_switching()
        self.check_delta_limit()

        passed = [c for c in self.checks if c["passed"]]
        failed = [c for c in self.checks if not c["passed"]]

        self._print(f"\n{'=' * 80}")
        self._print("📊 VERIFICATION SUMMARY")
        self._print(f"{'=' * 80}\n")
        self._print(f"✅ Passed: {len(passed)}/{len(self.checks)}")
        self._print(f"❌ Failed: {len(failed)}/{len(self.checks)}")
        for c in failed:
            self._print(f"  ✗ {c['check']}")
        for w in self.warnings:
            self._print(f"  ⚠️  {w}")

        return {
            "checks": self.checks,
            "warnings": self.warnings,
            "passed": len(passed),
            "failed": len(failed),
            "total": len(self.checks),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.checks, columns=["check", "expected", "observed", "tolerance", "passed"])


def main():
    """Run the default verification (gamma/omega = 2, c/omega = 5)."""
    validator = ResultValidator(gamma=SWEEP_GAMMA_OVER_OMEGA, omega=1.0, c=5.0)
    summary = validator.validate_all()
    sys.exit(EXIT_OK if summary["failed"] == 0 else EXIT_VERIFY)


if __name__ == "__main__":
    main()
