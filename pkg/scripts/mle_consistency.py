"""Median trace distance of linear and MLE reconstructions versus the pair number N."""

import argparse

import numpy as np

from polartomo import measures, mle, qmatrix, simulator as sim
from polartomo.polarization import standard_settings
from polartomo.tomography import linear_reconstruct


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--states", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=float, nargs="+", default=[1e3, 1e4, 1e5, 1e6])
    args = ap.parse_args()

    ss = np.random.SeedSequence(args.seed)
    state_seeds = ss.spawn(args.states)
    print("N,median_td_linear,median_td_mle,frac_linear_unphysical")
    for n in args.n:
        lin, fit, unphys = [], [], 0
        for s in state_seeds:
            state_rng, count_seed = s.spawn(2)
            rho = qmatrix.random_density_matrix(np.random.default_rng(state_rng))
            data = sim.simulate_tomography(rho, standard_settings(), sim.DetectorModel(n), seed=count_seed)
            rec = linear_reconstruct(data)
            unphys += not rec.physical["psd"]
            lin.append(measures.trace_distance(rec.rho, rho))
            fit.append(measures.trace_distance(mle.mle_fit(data).rho, rho))
        print(f"{n:g},{np.median(lin):.5f},{np.median(fit):.5f},{unphys / args.states:.2f}")


if __name__ == "__main__":
    main()
