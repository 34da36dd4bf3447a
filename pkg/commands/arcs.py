from algebra.coset import Side
from cache.storage import write_orbit_table
from services import Construction, ensure_cache_consistent

# базовая вершина каждой доли
BASE = {Side.ONE: 0, Side.TWO: 1}


def add_parser(subparsers, common) -> None:
    parser = subparsers.add_parser("arcs", parents=[common],
                                   help="orbits of a vertex stabilizer on s-arcs from a base vertex")
    parser.add_argument("--side", type=int, choices=[1, 2], default=2)
    parser.add_argument("--s", type=int, default=5)
    parser.add_argument("--group", choices=["H", "K"], default="K")
    parser.add_argument("--out", default=None, help="CSV table of orbits for s = 1..S")
    parser.set_defaults(handler=run)


def run(toolkit, args) -> int:
    if args.s < 1:
        raise ValueError("--s must be positive")
    construction: Construction = toolkit.construction()
    ensure_cache_consistent(construction)
    side = Side(args.side)
    vertex = BASE[side]
    analysis = construction.analysis
    summary = analysis.arc_orbits(vertex, args.s, args.group)
    payload = {"group": args.group, "side": int(side), "vertex": vertex, "s": args.s, "arcs": summary.arcs,
               "orbits": summary.count, "sizes": summary.sizes}
    if args.out:
        rows = []
        for s in range(1, args.s + 1):
            row = analysis.arc_orbits(vertex, s, args.group)
            rows.append((args.group, int(side), vertex, s, row.arcs, row.count, " ".join(map(str, row.sizes))))
        payload["table"] = write_orbit_table(args.out, rows)
    toolkit.emit(summary.describe(), payload)
    return 0
