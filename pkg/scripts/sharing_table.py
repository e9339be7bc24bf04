"""Print the headline sharing numbers: maximin violation and window per k,
single-selection peaks for k=4, the (3,2,4) partial-sharing subset and the
m=3 maximin."""
import math

from starshare.analysis import m3_no_sharing_check, selection_peak, violation_window
from starshare.model import ObserverSelection


def fmt_window(w):
    if w.empty:
        return f"no window; maximin {w.v_star:.6f} at G={w.g_star:.6f}"
    return f"G in ({w.lo:.6f}, {w.hi:.6f}); maximin {w.v_star:.6f} at G={w.g_star:.6f}"


def main():
    for k in (2, 3, 4, 5, 6):
        print(f"(n,2,{k}) all selections: {fmt_window(violation_window(2, k))}")
    g, s = selection_peak(2, 4, ObserverSelection((1, 2)))
    print(f"(2,2,4) S_12 peak {s:.6f} at G={g:.6f} (sqrt(3)/2 = {math.sqrt(3) / 2:.6f})")
    g, s = selection_peak(3, 4, ObserverSelection((1, 2, 2)))
    print(f"(3,2,4) S_122 peak {s:.6f} at G={g:.6f} (sqrt(5)/3 = {math.sqrt(5) / 3:.6f})")
    subset = [ObserverSelection.parse(t) for t in ("111", "112", "121", "211")]
    print(f"(3,2,4) subset 111,112,121,211: {fmt_window(violation_window(3, 4, subset))}")
    for k in (2, 3, 4):
        g1, g2, v = m3_no_sharing_check(2, k)
        print(f"(n,3,{k}) maximin {v:.6f} at G1={g1:.6f}, G2={g2:.6f}; classical bound {k - 1}")


if __name__ == "__main__":
    main()
