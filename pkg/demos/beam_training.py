"""Sector sweep, receive refinement and A-BFT contention on a random channel."""

import numpy as np

from wigig.beamforming import SectorChannel
from wigig.beamforming.beacon import a_bft_access, abft_success_probability
from wigig.beamforming.refine import RX_REFINE, BrpState, brp_setup, brp_transaction
from wigig.beamforming.sls import run_sls


def main(seed=11):
    rng = np.random.default_rng(seed)
    ch = SectorChannel.random(rng, 2, 16, 1, 8, mean_db=20.0)
    sls = run_sls(ch)
    i, r = sls.initiator, sls.responder
    print(f"SLS: initiator ant{i.antenna}/sec{i.sector} ({i.snr_db:.1f} dB), "
          f"responder ant{r.antenna}/sec{r.sector} ({r.snr_db:.1f} dB), {sls.message_count} frames")

    rx = brp_transaction(brp_setup(BrpState()), RX_REFINE, ch, sls)
    print(f"after receive refinement: rx sector {rx.sector} ({rx.snr_db:.1f} dB)")
    print(f"exhaustive best pair: {ch.global_argmax()}")

    trials = 5000
    wins = sum(a_bft_access(["a", "b"], 8, rng)["a"].success for _ in range(trials))
    print(f"\nA-BFT, 2 stations / 8 slots: {wins / trials:.3f} "
          f"(exact {abft_success_probability(2, 8):.3f})")


if __name__ == "__main__":
    main()
