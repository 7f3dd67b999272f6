#!/usr/bin/env python3
"""Regenerates src/closed_forms_series.inc and src/stieltjes.inc.

Series coefficients for the small-a branch of every closed form are produced by
sympy (exact rationals, printed to 17 significant digits). Stieltjes constants
come from mpmath at 40 digits.

    python3 tools/derive_taylor.py src/
"""
import sys
import sympy as sp
import mpmath as mp

a = sp.symbols("a")
E = sp.exp
ORDER = 9  # coefficients a^0 .. a^8

FORMULAS = {
    "F_PRED": ((5*a - 8) + 12*E(-a) - (a + 4)*E(-2*a)) / (4*a**3),
    "F1": (-a**3 + 5*a**2 - 10*a - 10*(E(-a) - 1)) / (2*a**3),
    "F2": (E(-a)*(-4*a**2 - 4*a - 2) + 2*E(a)) / (2*a)**3,
    "LEMMA22_MAIN": (a - 2)*(2*E(-a) - 2 - a**2 + 2*a) / (2*a**3),
    "I1_MAIN": (1 - a - E(-a)) / a**2,
    "I2_MAIN": (a - 2 + (a + 2)*E(-a)) / a**3,
    "DIAG_MAIN": (a**2 - 4*a + 6 - 2*E(-a)*(a + 3)) / (4*a**3),
    "INGHAM_MAIN": (E(-2*a)*(-4*a**2 - 4*a - 2) + 2) / (2*a)**3,
    # 1/(2a) pole removed; the evaluator adds it back.
    "GGM_UNWEIGHTED": (1 - E(-2*a)) / (4*a**2) - 1/(2*a),
}


def series_coeffs(expr):
    s = sp.series(expr, a, 0, ORDER).removeO()
    return [sp.Rational(s.coeff(a, k)) for k in range(ORDER)]


def main(outdir):
    lines = ["// Generated by tools/derive_taylor.py. Do not edit.",
             "// Coefficients c_0..c_8 of the expansion about a = 0."]
    for name, expr in FORMULAS.items():
        cs = series_coeffs(expr)
        body = ", ".join(sp.N(c, 17).__str__() for c in cs)
        exact = ", ".join(str(c) for c in cs)
        lines.append(f"// {name}: {exact}")
        lines.append(f"inline constexpr std::array<double, {ORDER}> k{name.title().replace('_', '')}Series{{{body}}};")
    with open(f"{outdir}/closed_forms_series.inc", "w") as fh:
        fh.write("\n".join(lines) + "\n")

    mp.mp.dps = 40
    g = [mp.stieltjes(n) for n in range(13)]
    body = ",\n    ".join(mp.nstr(x, 20) for x in g)
    with open(f"{outdir}/stieltjes.inc", "w") as fh:
        fh.write("// Generated by tools/derive_taylor.py. Do not edit.\n")
        fh.write("// Stieltjes constants gamma_0 .. gamma_12 (mpmath, 40 digits).\n")
        fh.write(f"inline constexpr std::array<double, 13> kStieltjes{{\n    {body}}};\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src")
