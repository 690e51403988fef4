"""Monte-Carlo error bars of the measures of the bundled tomography dataset as a function of the assumed integration time."""

import argparse
from dataclasses import replace

from polartomo import dataio, measures
from polartomo.tomography import TomographyInput

PUBLISHED_STD = {"von_neumann": 0.070, "linear_entropy": 0.040, "concurrence": 0.051, "tangle": 0.058,
                 "eof": 0.060, "renyi2_A": 0.001, "log_negativity": 0.042}


def with_integration_time(data: TomographyInput, t_s: float) -> TomographyInput:
    # The accidental rate scales as tau/T, so tau is scaled too to keep it fixed.
    recs = [replace(r, t_s=t_s, tau_s=r.tau_s * t_s / r.t_s) for r in data.records]
    return TomographyInput(recs, data.convention)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=float, nargs="+", default=[0.3, 1.0, 3.0, 10.0, 30.0])
    ap.add_argument("--trials", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = dataio.read_tomography_csv(dataio.data_path("tomography.csv"))
    names = list(PUBLISHED_STD)
    print("t_s," + ",".join(names))
    print("published," + ",".join(f"{PUBLISHED_STD[k]:.4f}" for k in names))
    for t in args.t:
        rep = measures.report_with_uncertainty(with_integration_time(data, t), args.trials, args.seed)
        print(f"{t:g}," + ",".join(f"{getattr(rep, k + '_std'):.4f}" for k in names))


if __name__ == "__main__":
    main()
