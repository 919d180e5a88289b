from src.harness import HarnessContext
from src.root_datum import RootDatum
from src.sampling import RadialGrid, lp_norm
import time

def test_system():
    """Calibrate one datum and print the Plancherel ratios of the default family"""
    print("Calibrating rank one m = (1, 0)...")
    start = time.perf_counter()
    ctx = HarnessContext.build(RootDatum.rank_one(1.0, 0.0), RadialGrid.build(12.0, 24),
                               RadialGrid.build(24.0, 24))
    print(f"kappa = {ctx.datum.kappa:.10f}, flat kappa = {ctx.datum.flat_kappa:.10f} "
          f"({time.perf_counter() - start:.2f}s)")

    print("\nPlancherel ratios:")
    for fid, f, F, reason in ctx.curved_pairs(0.0):
        if f is None:
            print(f"  {fid:40s} skipped: {reason}")
            continue
        print(f"  {fid:40s} {lp_norm(F.as_sampled(), 2.0) / lp_norm(f, 2.0):.8f}")
    return ctx

if __name__ == "__main__":
    ctx = test_system()
    print("\nSystem test complete!")
