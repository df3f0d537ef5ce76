"""Stability probe: fixed RK4 on 3D TG at the error-matched step sizes."""
import numpy as np

import spectralrk as srk

TG3D = """
[grid]
shape = 32 32 32

[problem]
kind = taylor_green
reynolds = 280

[run]
integrator = rk4
mode = fixed
h = {h}
t_end = 5.0
"""

for h in (0.0931, 0.0439, 0.0319):
    cfg = srk.parse_config(TG3D.format(h=h))
    res = srk.run_simulation(cfg)
    e = res.records[-1].e_kin
    print(
        f"h={h}: steps={res.steps} evals={res.rhs_evals} E_kin(5)={e:.6f}",
        flush=True,
    )
