"""
Ghost fringes with electrons
============================

De Broglie wavelength 314 nm, slits 0.5 mm apart and 0.05 mm wide, D1 one
metre behind the slits and the source one metre in front of them. D1 is
held fixed while D2 is scanned; the coincidence pattern has the Young
fringe width for the full distance D = L1 + 2 L2.
"""
from ghostsim import (Particle, ScanRequest, bundled_path, fit_fringes, load_scenario, run_scan,
                      visibility, write_csv)

scenario = load_scenario(bundled_path("fig2"))
exp = scenario.experiment
fp = exp.fringe_params()
print(f"predicted w2 = {fp.w2 * 1e3:.4f} mm   (Young: {fp.young_w2 * 1e3:.4f} mm)")
print(f"predicted w1 = {fp.w1 * 1e3:.4f} mm   (Young: {fp.young_w1 * 1e3:.4f} mm)")

# %%
# Two scans of D2, with D1 at the axis and displaced by 0.2 mm. Moving D1
# one way moves the ghost fringes the other way, three times as far.
for y1 in (0.0, 0.2e-3):
    res = run_scan(ScanRequest(Particle.P2, y1, -5e-3, 5e-3, 2001, exp))
    fit = fit_fringes(res)
    print(f"y1 = {y1 * 1e3:.1f} mm: fringe width {fit.fringe_width * 1e3:.4f} mm, "
          f"bright fringe at {fit.center_offset * 1e3:+.4f} mm, visibility {fit.visibility:.4f}")
    write_csv(res, f"ghost_y1_{y1 * 1e3:.1f}mm.csv")

# %%
# Without coincidence detection D2 sees a smooth blob.
single = run_scan(ScanRequest(Particle.P2, None, -5e-3, 5e-3, 401, exp))
print("fringe visibility of the singles pattern:", visibility(single.positions, single.densities))
