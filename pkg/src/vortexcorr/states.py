"""Catalog of the shipped state families.

A StateSpec is the plain-data description used by the CLI, the closed-form
evaluators, the oracle and output provenance; build_state turns it into a
density matrix. Defaults follow the canonical configurations: the coherent
state obeys alpha_x = i*alpha_y with unit intensity (ring-shaped one-body
density) and thermal/cothermal default to unit mean occupancy per mode.
"""

import math
import re
from dataclasses import dataclass, replace

from .errors import VortexError
from .fock import (Basis, Statistics, make_cothermal, make_coherent,
                   make_fock, make_noon, make_thermal)

KINDS = ("fermi-fock", "bose-fock", "coherent", "thermal", "cothermal",
         "noon")

_DEFAULT_CUTOFF = {"coherent": 16, "thermal": 40, "cothermal": 40}
_DEFAULT_BASIS = {"coherent": "dipole", "cothermal": "dipole"}


class SpecError(VortexError, ValueError):
    """Malformed state description."""


@dataclass(frozen=True)
class StateSpec:
    kind: str
    n: int = 1
    m: int = 1
    alpha_a: complex = 0.0j
    alpha_b: complex = 0.0j
    nbar_a: float = 1.0
    nbar_b: float = 1.0
    cutoff: int = -1       # -1 -> per-kind default
    basis: str = ""        # ""  -> per-kind default

    def normalized(self):
        kind = self.kind
        if kind not in KINDS:
            raise SpecError(f"unknown state kind {kind!r}; expected one of "
                            + ", ".join(KINDS))
        basis = self.basis or _DEFAULT_BASIS.get(kind, "vortex")
        if basis not in ("vortex", "dipole"):
            raise SpecError(f"unknown basis {basis!r}")
        cutoff = self.cutoff
        if cutoff < 0:
            cutoff = _DEFAULT_CUTOFF.get(kind, max(self.n, self.m, 1))
        return replace(self, basis=basis, cutoff=cutoff)


def fermi_fock(basis=""):
    return StateSpec(kind="fermi-fock", n=1, m=1, basis=basis).normalized()


def bose_fock(n=1, m=1, basis=""):
    return StateSpec(kind="bose-fock", n=n, m=m, basis=basis).normalized()


def coherent(alpha_a=1.0j, alpha_b=1.0 + 0.0j, cutoff=-1):
    return StateSpec(kind="coherent", alpha_a=alpha_a, alpha_b=alpha_b,
                     cutoff=cutoff).normalized()


def thermal(nbar_a=1.0, nbar_b=1.0, cutoff=-1):
    return StateSpec(kind="thermal", nbar_a=nbar_a, nbar_b=nbar_b,
                     cutoff=cutoff).normalized()


def cothermal(alpha=math.sqrt(0.5), nbar=0.5, cutoff=-1):
    # alpha_a is the displacement, nbar_a the thermal part of each mode
    return StateSpec(kind="cothermal", alpha_a=alpha, nbar_a=nbar,
                     cutoff=cutoff).normalized()


def noon():
    return StateSpec(kind="noon").normalized()


def build_state(spec):
    """Construct the density matrix a StateSpec describes."""
    spec = spec.normalized()
    basis = Basis(spec.basis)
    if spec.kind == "fermi-fock":
        return make_fock(spec.n, spec.m, Statistics.FERMI, basis)
    if spec.kind == "bose-fock":
        return make_fock(spec.n, spec.m, Statistics.BOSE, basis)
    if spec.kind == "coherent":
        return make_coherent(spec.alpha_a, spec.alpha_b, spec.cutoff, basis)
    if spec.kind == "thermal":
        return make_thermal(spec.nbar_a, spec.nbar_b, spec.cutoff, basis)
    if spec.kind == "cothermal":
        return make_cothermal(spec.alpha_a, spec.nbar_a, spec.cutoff, basis)
    if spec.kind == "noon":
        return make_noon(Basis(spec.basis))
    raise SpecError(f"unknown state kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# plain-data round trip (config files, provenance blocks)
# ---------------------------------------------------------------------------

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"\s*(?P<im>[+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?\s*"
    r"(?P<unit>[ij])?\s*$")


def parse_complex(text):
    """Parse 'a+bi' style complex literals ('i' or 'j', either part may be
    omitted). Also accepts plain numbers."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = text.strip()
    if not s:
        raise SpecError("empty complex literal")
    match = _COMPLEX_RE.match(s)
    if not match or (match.group("re") is None and match.group("unit") is None):
        raise SpecError(f"cannot parse complex literal {text!r}")
    re_part, im_part, unit = match.group("re", "im", "unit")
    if unit is None:
        if im_part is not None:
            raise SpecError(f"cannot parse complex literal {text!r}")
        return complex(float(re_part), 0.0)
    if im_part is None:
        # forms like '2i', 'i', '-1.5i': the leading number is the imag part
        if re_part is None:
            return complex(0.0, 1.0)
        return complex(0.0, float(re_part))
    im_clean = im_part.replace(" ", "")
    if im_clean in ("+", "-"):
        im_clean += "1"
    return complex(float(re_part or 0.0), float(im_clean))


def format_complex(z):
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def spec_to_dict(spec):
    spec = spec.normalized()
    out = {"kind": spec.kind, "basis": spec.basis, "cutoff": spec.cutoff}
    if spec.kind in ("fermi-fock", "bose-fock"):
        out.update(n=spec.n, m=spec.m)
    elif spec.kind == "coherent":
        out.update(alpha_x=format_complex(spec.alpha_a),
                   alpha_y=format_complex(spec.alpha_b))
    elif spec.kind == "thermal":
        out.update(nbar_a=spec.nbar_a, nbar_b=spec.nbar_b)
    elif spec.kind == "cothermal":
        out.update(alpha=format_complex(spec.alpha_a), nbar=spec.nbar_a)
    return out


def spec_from_dict(data):
    try:
        kind = data["kind"]
    except (KeyError, TypeError):
        raise SpecError("state description needs a 'kind' entry") from None
    kwargs = {"kind": kind}
    if "basis" in data:
        kwargs["basis"] = data["basis"]
    if "cutoff" in data:
        kwargs["cutoff"] = int(data["cutoff"])
    for key in ("n", "m"):
        if key in data:
            kwargs[key] = int(data[key])
    if "alpha_x" in data:
        kwargs["alpha_a"] = parse_complex(data["alpha_x"])
    if "alpha_y" in data:
        kwargs["alpha_b"] = parse_complex(data["alpha_y"])
    if "alpha" in data:
        kwargs["alpha_a"] = parse_complex(data["alpha"])
    if "nbar_a" in data:
        kwargs["nbar_a"] = float(data["nbar_a"])
    if "nbar_b" in data:
        kwargs["nbar_b"] = float(data["nbar_b"])
    if "nbar" in data:
        kwargs["nbar_a"] = float(data["nbar"])
    return StateSpec(**kwargs).normalized()
