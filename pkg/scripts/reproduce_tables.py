"""Recompute every published number from the bundled datasets and print a comparison table."""

import argparse

from polartomo import bell, calibration, dataio, measures, mle


def rows():
    chsh = dataio.read_bell_csv(dataio.data_path("bell_chsh.csv"))
    for sub in (False, True):
        r = bell.chsh_s(chsh, subtract_accidentals=sub)
        tag = "subtracted" if sub else "raw"
        yield f"S ({tag})", r.s_value, 2.71
        yield f"sigma_S poisson ({tag})", r.s_sigma, 0.10
        yield f"sigma_S from dn_c ({tag})", bell.chsh_s(chsh, subtract_accidentals=sub, reported_sigma=True).s_sigma, 0.10

    vis = dataio.read_bell_csv(dataio.data_path("visibility.csv"))
    v = bell.basis_visibilities(vis)
    yield "V_HV", v["HV"], 0.9850
    yield "V_DA", v["DA"], 0.8771
    p = calibration.pump_params_from_records(vis)
    yield "D", p.d_background, 0.275
    yield "N0", p.n0, 73.73
    yield "theta_p", p.theta_p, 45.25
    yield "phi_m", p.phi_m, 37.62

    published = {"von_neumann": 0.720, "linear_entropy": 0.425, "purity": 0.682, "concurrence": 0.602,
                 "tangle": 0.362, "eof": 0.471, "renyi2_A": 0.691, "log_negativity": 0.678}
    ref = measures.measures_report(dataio.reference_rho())
    data = dataio.read_tomography_csv(dataio.data_path("tomography.csv"))
    fit = measures.measures_report(mle.mle_fit(data).rho)
    for k, want in published.items():
        yield f"{k} (published matrix)", getattr(ref, k), want
        yield f"{k} (MLE on counts)", getattr(fit, k), want


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    print(f"{'quantity':40s} {'computed':>12s} {'published':>10s}")
    for name, got, want in rows():
        print(f"{name:40s} {got:12.5f} {want:10.4f}")


if __name__ == "__main__":
    main()
