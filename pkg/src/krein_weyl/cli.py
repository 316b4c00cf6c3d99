"""Command-line front end.

Every verb reads JSON inputs, writes one deterministic JSON report and exits
with 0 on success, 2 when a check fails and 1 on usage or parse errors.
"""

from __future__ import annotations

import sys
from dataclasses import asdict
from functools import wraps
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import click
import numpy as np

from . import acceptance
from .boundary import (boundary_structure, from_colligation, green_identity_residual,
                       main_transform, theta as theta_fn, weyl as weyl_eval)
from .colligation import is_closely_connected, validate as validate_colligation
from .config import set_tolerance_scale, tol, tolerance_scale
from .exceptions import KreinWeylError, SchemaError
from .extensions import (NOT_INVERTIBLE, build_extension, coresolvent, direct_coresolvent_oracle,
                         direct_resolvent_oracle, resolvent, spectral_point_check)
from .gencores import compression_oracle, couple, generalized_coresolvent, regularity_index
from .io import (decode_colligation, decode_pair, decode_phi, decode_realize_input,
                 decode_relation, dumps, encode_colligation, encode_complex, encode_pair,
                 encode_relation, load_json)
from .kernels import (SamplerConfig, classify_pair, kernel_gamma_identities_residual,
                      negative_squares, s_kernel)
from .pspace import decompose_subspace
from .realize import realize as realize_fn
from .relation import classify, parts as relation_parts

__all__ = ["cli", "main"]

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


def parse_complex(text: str) -> complex:
    """``"0.5"``, ``"0.3+0.2j"``, ``"0.3+0.2i"`` or ``"[0.3, 0.2]"``."""
    s = text.strip().replace(" ", "")
    if s.startswith("["):
        try:
            re_, im_ = (float(x) for x in s.strip("[]").split(","))
        except ValueError:
            raise click.BadParameter(f"cannot parse {text!r} as [re, im]") from None
        return complex(re_, im_)
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise click.BadParameter(f"cannot parse {text!r} as a complex number") from None


class ComplexType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(value)
        except click.BadParameter as e:
            self.fail(e.message, param, ctx)


COMPLEX = ComplexType()
INPUT = click.Path(exists=True, dir_okay=False, path_type=Path)


def _header(verb: str, seed: int) -> dict:
    return {"tool": "krein-weyl", "version": _version(), "verb": verb, "seed": seed,
            "tol_scale": tolerance_scale(), "tolerances": asdict(tol())}


def _emit(report: dict, out: Path | None) -> None:
    text = dumps(report) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


def verb(fn):
    """Shared ``--seed/--out/--tol-scale`` handling, reporting and exit codes.

    The wrapped function returns ``(result, passed)``.
    """
    @click.option("--seed", type=int, default=0, show_default=True, help="Seed for sampling.")
    @click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                  help="Write the report here instead of stdout.")
    @click.option("--tol-scale", type=float, default=None,
                  help="Multiply all tolerances (overrides KREIN_WEYL_TOL).")
    @wraps(fn)
    def wrapper(seed, out, tol_scale, **kw):
        name = click.get_current_context().info_name
        previous = tolerance_scale()
        if tol_scale is not None:
            if not tol_scale > 0:
                raise click.BadParameter("must be positive", param_hint="--tol-scale")
            set_tolerance_scale(tol_scale)
        try:
            report = {"header": _header(name, seed)}
            try:
                result, passed = fn(seed=seed, **kw)
            except SchemaError as e:
                click.echo(f"error: {e}", err=True)
                return EXIT_USAGE
            except KreinWeylError as e:
                result, passed = {"error": f"{type(e).__name__}: {e}"}, False
            report["result"] = result
            report["status"] = "ok" if passed else "failed"
            _emit(report, out)
            return EXIT_OK if passed else EXIT_FAILED
        finally:
            set_tolerance_scale(previous)
    return wrapper


def _load(path: Path, decoder):
    return decoder(load_json(path), f"{path}:$")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(_version(), prog_name="krein-weyl")
def cli():
    """Boundary pairs, Weyl functions and extensions of isometries in Pontryagin spaces."""


@cli.command()
@click.option("--colligation", type=INPUT, help="Colligation JSON.")
@click.option("--pair", type=INPUT, help="Boundary pair JSON.")
@click.option("--relation", type=INPUT, help="Linear relation JSON.")
@verb
def validate(seed, colligation, pair, relation):
    """Check colligation identities, pair unitarity or classify a relation."""
    given = [p for p in (colligation, pair, relation) if p is not None]
    if len(given) != 1:
        raise click.UsageError("give exactly one of --colligation, --pair, --relation")
    if colligation is not None:
        c = _load(colligation, decode_colligation)
        res = validate_colligation(c)
        out = {"kind": "colligation", **res, "kappa": c.kappa}
        if res["passed"]:
            out["closely_connected"] = is_closely_connected(c)
        return out, res["passed"]
    if pair is not None:
        bp = _load(pair, decode_pair)
        u = main_transform(bp)
        out = {"kind": "pair", "green_residual": green_identity_residual(bp),
               "gamma_unitary": classify(bp.gamma).unitary,
               "main_transform_unitary": classify(u).unitary,
               "structure": boundary_structure(bp),
               "classification": classify_pair(bp).as_dict()}
        return out, out["gamma_unitary"] and out["main_transform_unitary"]
    t = _load(relation, decode_relation)
    dom, ran, ker, mul = relation_parts(t)
    iso, pos, neg = decompose_subspace(dom)
    out = {"kind": "relation", "classification": asdict(classify(t)),
           "dims": {"dom": dom.dim, "ran": ran.dim, "ker": ker.dim, "mul": mul.dim},
           "domain_decomposition": {"isotropic": iso.dim, "positive": pos.dim,
                                    "negative": neg.dim}}
    return out, True


@cli.command()
@click.option("--pair", type=INPUT, required=True)
@click.option("--lambda", "lam", type=COMPLEX, required=True, help="Evaluation point.")
@verb
def weyl(seed, pair, lam):
    """Weyl function and γ-field of a pair at one point."""
    bp = _load(pair, decode_pair)
    ev = weyl_eval(bp, lam)
    return {"lambda": encode_complex(lam), "branch": ev.branch, "theta": ev.theta,
            "gamma": ev.gamma, "residual": ev.residual}, True


@cli.command()
@click.option("--pair", type=INPUT, required=True)
@click.option("--lambda", "lam", type=COMPLEX, required=True)
@click.option("--omega", type=COMPLEX, required=True)
@verb
def kernel(seed, pair, lam, omega):
    """Four-branch kernel S and its γ-field identity at one point pair."""
    bp = _load(pair, decode_pair)
    s = s_kernel(lambda z: theta_fn(bp, z), lam, omega)
    res = kernel_gamma_identities_residual(bp, lam, omega)
    return {"lambda": encode_complex(lam), "omega": encode_complex(omega), "kernel": s,
            "identity_residual": res}, res <= 1e-9 * max(1.0, float(np.abs(s).max()))


@cli.command()
@click.option("--theta", "source", type=INPUT, required=True,
              help="Pair or colligation JSON whose Weyl function is sampled.")
@click.option("--expected", type=int, default=0, show_default=True,
              help="Expected count; only sizes the first sample.")
@verb
def negsq(seed, source, expected):
    """Number of negative squares of the Schur kernel."""
    doc = load_json(source)
    if isinstance(doc, dict) and "backing" in doc:
        bp = decode_pair(doc, f"{source}:$")
    else:
        bp = from_colligation(decode_colligation(doc, f"{source}:$"))
    exclude = ()
    c = bp.colligation
    if c is not None and c.dim:
        exclude = tuple(complex(1 / e) for e in np.linalg.eigvals(c.T) if abs(e) > 1e-14)
    sampler = SamplerConfig(seed=seed, expected=expected, exclude=exclude, exclusion_radius=1e-3)
    res = negative_squares(lambda z: theta_fn(bp, z), sampler)
    return {"count": res.count, "stabilized": res.stabilized, "samples": res.samples}, res.stabilized


@cli.command()
@click.option("--pair", type=INPUT, required=True)
@click.option("--phi", type=INPUT, required=True, help="Boundary parameter JSON.")
@click.option("--lambda", "lam", type=COMPLEX, default=None,
              help="Optional point for the spectral check.")
@verb
def extend(seed, pair, phi, lam):
    """Build the extension selected by a boundary parameter."""
    bp = _load(pair, decode_pair)
    p = _load(phi, decode_phi)
    v = build_extension(bp, p)
    out = {"extension": encode_relation(v), "classification": asdict(classify(v))}
    if lam is not None:
        out["spectral_check"] = spectral_point_check(bp, p, lam)
    return out, True


@cli.command("resolvent")
@click.option("--pair", type=INPUT, required=True)
@click.option("--phi", type=INPUT, required=True)
@click.option("--lambda", "lam", type=COMPLEX, default=None, help="Resolvent point.")
@click.option("--z", type=COMPLEX, default=None, help="Coresolvent point.")
@verb
def resolvent_cmd(seed, pair, phi, lam, z):
    """Kreĭn formula for (V_Φ - λ)^-1 or (I - zV_Φ)^-1 checked against inversion."""
    if (lam is None) == (z is None):
        raise click.UsageError("give exactly one of --lambda, --z")
    bp = _load(pair, decode_pair)
    p = _load(phi, decode_phi)
    v = build_extension(bp, p)
    if lam is not None:
        point, formula, oracle = lam, resolvent, direct_resolvent_oracle
    else:
        point, formula, oracle = z, coresolvent, direct_coresolvent_oracle
    want = oracle(v, point)
    try:
        got = formula(bp, p, point)
    except KreinWeylError as e:
        agree = want is NOT_INVERTIBLE
        return {"point": encode_complex(point), "formula": f"{type(e).__name__}: {e}",
                "oracle": "not invertible" if agree else want}, agree
    if want is NOT_INVERTIBLE:
        return {"point": encode_complex(point), "formula": got, "oracle": "not invertible"}, False
    res = float(np.abs(got - want).max() / max(1.0, np.abs(want).max()))
    return {"point": encode_complex(point), "formula": got, "oracle": want,
            "relative_residual": res}, res <= 1e-8


@cli.command()
@click.option("--base", type=INPUT, required=True, help="Ordinary base pair JSON.")
@click.option("--parameter", type=INPUT, required=True, help="Parameter pair JSON.")
@click.option("--z", type=COMPLEX, required=True)
@verb
def gencores(seed, base, parameter, z):
    """Generalized coresolvent of a coupling and its regularity index."""
    cp = couple(_load(base, decode_pair), _load(parameter, decode_pair))
    k = generalized_coresolvent(cp, z)
    res = float(np.abs(k - compression_oracle(cp, z)).max() / max(1.0, np.abs(k).max()))
    ri = regularity_index(cp, SamplerConfig(seed=seed, expected=cp.parameter_pair.H.kappa))
    return {"z": encode_complex(z), "K_z": k, "residual_vs_compression": res,
            "regularity_index": ri.as_dict()}, res <= 1e-8 and ri.stabilized


@cli.command("realize")
@click.option("--input", "source", type=INPUT, required=True, help="Taylor data JSON.")
@verb
def realize_cmd(seed, source):
    """Unitary colligation and boundary pair realizing rational Taylor data."""
    data, alpha = _load(source, decode_realize_input)
    r = realize_fn(data, alpha)
    return {"colligation": encode_colligation(r.colligation), "kappa": r.kappa,
            "alpha": encode_complex(alpha), "pair": encode_pair(r.pair)}, True


@cli.command()
@click.option("--only", type=click.IntRange(1, 9), multiple=True,
              help="Run only these criteria (repeatable).")
@verb
def suite(seed, only):
    """Run the acceptance criteria."""
    numbers = sorted(only) if only else sorted(acceptance.CRITERIA)
    results = [acceptance.run_criterion(k, seed) for k in numbers]
    for r in results:
        click.echo(r.line(), err=True)
    return {"criteria": [r.as_dict() for r in results]}, all(r.passed for r in results)


def main(argv: list[str] | None = None) -> int:
    """Console entry point; maps click usage errors to exit code 1."""
    try:
        rv = cli.main(args=argv, prog_name="krein-weyl", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
