"""Walk through the cross-check verdict table for one state.

The verification layer recomputes every pair density along a route that
never touches the operator engine and grades the published closed forms
against both.  Verdicts: Confirmed (agreement below 1e-6),
Typo-suspected (a printed formula disagrees with its own context), and
Convention-dependent (the number is right under a stated reading).
Only engine-vs-reference rows gate the exit status; findings about the
printed formulas are annotations.

Run:  python demos/claim_check.py [kind]   (default bose-fock)
"""

import sys
import textwrap

from vortexcorr import cross_validate


def main():
    kind = sys.argv[1] if len(sys.argv) > 1 else "bose-fock"
    rows = cross_validate(kind, resolution=21)
    for r in rows:
        flag = "gating" if r.gating else "note"
        print(f"[{r.verdict:<20}] {r.claim_id}  ({flag}, "
              f"max dev {r.max_abs_deviation:.2e})")
        print(textwrap.indent(textwrap.fill(
            f"printed: {r.printed_form}", 74), "    "))
        print(textwrap.indent(textwrap.fill(
            f"resolved: {r.resolved_form}", 74), "    "))
        if r.detail:
            print(textwrap.indent(textwrap.fill(r.detail, 74), "    "))
    gating = [r for r in rows if r.gating]
    print(f"\n{sum(r.verdict == 'Confirmed' for r in gating)}/{len(gating)} "
          "gating rows confirmed for", kind)


if __name__ == "__main__":
    main()
