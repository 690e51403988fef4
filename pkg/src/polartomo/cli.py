"""Command-line entry point: ``polartomo {tomo,measures,bell,simulate,calibrate}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bell, calibration, dataio, measures, simulator
from .errors import EXIT_OK, EXIT_PARSE, NoConvergence, ParseError, TomoError
from .mle import MleOptions, mle_fit
from .polarization import CONVENTIONS, DEFAULT_CONVENTION, standard_settings
from .tomography import linear_reconstruct

BELL_ANGLES_A = (0.0, -45.0, 45.0, 90.0)
BELL_ANGLES_B = (-22.5, 22.5, 67.5, 112.5)


def _matrix_doc(rho) -> dict:
    a = np.asarray(rho)
    return {"real": a.real.tolist(), "imag": a.imag.tolist()}


def _floats(text: str, n: int | None = None) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {len(vals)}")
    return vals


def _layout(text: str):
    return _floats(text, 4)


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def cmd_tomo(args) -> int:
    data = dataio.read_tomography_csv(args.input, args.convention)
    sub = not args.no_subtract_accidentals
    lin = linear_reconstruct(data, sub)
    fit = mle_fit(data, MleOptions(max_iter=args.max_iter, subtract_accidentals=sub))
    doc = {
        "N": lin.n_norm,
        "accidentals_subtracted": sub,
        "linear": {"rho": _matrix_doc(lin.rho), "eigenvalues": lin.eigenvalues.tolist(),
                   "physical": lin.physical},
        "mle": {"rho": _matrix_doc(fit.rho),
                "eigenvalues": np.sort(np.linalg.eigvalsh(fit.rho))[::-1].tolist(),
                "likelihood": fit.likelihood_value, "iterations": fit.iterations,
                "converged": fit.converged},
    }
    if args.rho_out:
        Path(args.rho_out).write_text(dataio.format_rho(fit.rho))
    _emit(doc, args.output)
    if not fit.converged:
        raise NoConvergence(f"MLE did not converge within {args.max_iter} iterations")
    return EXIT_OK


def cmd_measures(args) -> int:
    if (args.csv is None) == (args.rho is None):
        raise ParseError("give exactly one of --csv or --rho")
    if args.rho is not None:
        report = measures.measures_report(dataio.read_rho(args.rho))
    else:
        data = dataio.read_tomography_csv(args.csv, args.convention)
        opts = MleOptions(subtract_accidentals=not args.no_subtract_accidentals)
        if args.mc_trials > 0:
            report = measures.report_with_uncertainty(data, args.mc_trials, args.seed, opts, args.workers)
        else:
            fit = mle_fit(data, opts)
            if not fit.converged:
                raise NoConvergence("MLE did not converge")
            report = measures.measures_report(fit.rho)
    _emit(report.to_dict(), args.output)
    return EXIT_OK


def cmd_bell(args) -> int:
    records = dataio.read_bell_csv(args.input)
    sub = not args.no_subtract_accidentals
    if args.visibility:
        doc = {"visibility": bell.basis_visibilities(records, sub), "accidentals_subtracted": sub}
    else:
        doc = bell.chsh_s(records, args.layout, sub, args.reported_sigma).to_dict()
        doc["sigma_source"] = "reported dn_c" if args.reported_sigma else "poisson"
    doc["accidentals"] = [{"theta_a": r.theta_a, "theta_b": r.theta_b, "rate": r.accidental} for r in records]
    _emit(doc, args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if not (args.tomo_out or args.bell_out):
        raise ParseError("give --tomo-out and/or --bell-out")
    if args.state == "bell":
        rho = simulator.BELL_STATE
    else:
        rho = simulator.spdc_state(simulator.PumpState(args.theta_p, args.phi))
    d = simulator.DetectorModel(args.n_flux, args.tau_s, args.t_s, args.singles_a, args.singles_b)
    ss = np.random.SeedSequence(args.seed)
    tomo_seed, bell_seed = ss.spawn(2)
    noise = not args.no_noise
    if args.tomo_out:
        data = simulator.simulate_tomography(rho, standard_settings(), d, tomo_seed, noise, args.convention)
        Path(args.tomo_out).write_text(dataio.format_tomography_csv(data))
    if args.bell_out:
        recs = simulator.simulate_bell(args.angles_a, args.angles_b, d, rho, args.model, bell_seed, noise)
        Path(args.bell_out).write_text(dataio.format_bell_csv(recs))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    if not (args.four_setting or args.power):
        raise ParseError("give --four-setting and/or --power")
    doc = {}
    if args.four_setting:
        recs = dataio.read_bell_csv(args.four_setting)
        fit = calibration.pump_params_from_records(recs, args.subtract_accidentals, args.background_in_45)
        doc["pump"] = fit.to_dict()
    if args.power:
        pf = calibration.power_fit(dataio.read_power_csv(args.power))
        doc["power_fit"] = pf.to_dict()
        if args.crystal:
            crystal = calibration.CrystalParams(*args.crystal)
            doc["chi_eff_m_per_V"] = calibration.chi2_effective(pf.slope_alpha, crystal)
    _emit(doc, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polartomo", description=__doc__)
    sp = p.add_subparsers(dest="subcommand", required=True)

    def common(q, accidentals=True):
        q.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
        if accidentals:
            q.add_argument("--no-subtract-accidentals", action="store_true",
                           help="use raw coincidence rates")

    t = sp.add_parser("tomo", help="linear and maximum-likelihood state reconstruction")
    t.add_argument("input", help="16-row tomography CSV")
    t.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION)
    t.add_argument("--max-iter", type=int, default=50_000)
    t.add_argument("--rho-out", help="also write the MLE density matrix in text form")
    common(t)
    t.set_defaults(func=cmd_tomo)

    m = sp.add_parser("measures", help="entropy and entanglement measures")
    m.add_argument("--csv", help="tomography CSV (fitted by MLE first)")
    m.add_argument("--rho", help="density matrix text file: real block then imaginary block")
    m.add_argument("--mc-trials", type=int, default=200, help="Monte-Carlo trials; 0 disables error bars")
    m.add_argument("--seed", type=int)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION)
    common(m)
    m.set_defaults(func=cmd_measures)

    b = sp.add_parser("bell", help="CHSH parameter or basis visibilities")
    b.add_argument("input", help="Bell CSV")
    b.add_argument("--visibility", action="store_true", help="report H/V and D/A visibilities instead of S")
    b.add_argument("--layout", type=_layout, default=bell.CANONICAL_ANGLES,
                   help="CHSH angles a,a',b,b' in degrees (default -45,0,-22.5,22.5)")
    b.add_argument("--reported-sigma", action="store_true",
                   help="propagate the dn_c column instead of Poisson errors")
    common(b)
    b.set_defaults(func=cmd_bell)

    s = sp.add_parser("simulate", help="write synthetic tomography and/or Bell CSVs")
    s.add_argument("--state", choices=("bell", "pump"), default="bell")
    s.add_argument("--theta-p", type=float, default=45.0, help="pump angle in degrees (state=pump)")
    s.add_argument("--phi", type=float, default=0.0, help="pair phase in degrees (state=pump)")
    s.add_argument("--n-flux", type=float, default=1e6, help="pair rate N in cps")
    s.add_argument("--t-s", type=float, default=1.0)
    s.add_argument("--tau-s", type=float, default=0.0)
    s.add_argument("--singles-a", type=float, default=0.0)
    s.add_argument("--singles-b", type=float, default=0.0)
    s.add_argument("--no-noise", action="store_true")
    s.add_argument("--seed", type=int)
    s.add_argument("--model", choices=("quantum", "hvt"), default="quantum")
    s.add_argument("--angles-a", type=_floats, default=BELL_ANGLES_A)
    s.add_argument("--angles-b", type=_floats, default=BELL_ANGLES_B)
    s.add_argument("--convention", choices=CONVENTIONS, default=DEFAULT_CONVENTION)
    s.add_argument("--tomo-out")
    s.add_argument("--bell-out")
    s.set_defaults(func=cmd_simulate)

    c = sp.add_parser("calibrate", help="pump-state parameters and pump-power fit")
    c.add_argument("--four-setting", help="Bell-schema CSV with (0,0), (90,90), (45,45), (0,90), (90,0) rows")
    c.add_argument("--power", help="CSV with power_mw,cc_rate_cps")
    c.add_argument("--crystal", type=lambda x: _floats(x),
                   help="L_m,A_m2,n_pump,n_spdc,omega_pump[,duty] to back out chi_eff")
    c.add_argument("--subtract-accidentals", action="store_true")
    c.add_argument("--background-in-45", action="store_true",
                   help="subtract D from N(45,45) before the phase step")
    common(c, accidentals=False)
    c.set_defaults(func=cmd_calibrate)
    return p


def _fail(exc: Exception, code: int) -> int:
    name = exc.code if isinstance(exc, TomoError) else type(exc).__name__
    print(json.dumps({"error": name, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TomoError as exc:
        return _fail(exc, exc.exit_code)
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(exc, EXIT_PARSE)


if __name__ == "__main__":
    sys.exit(main())
