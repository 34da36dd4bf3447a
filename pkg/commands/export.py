import os

from cache.models import ExportFormat
from cache.storage import export_graph
from config import Config
from services import Construction, ensure_cache_consistent


def add_parser(subparsers, common) -> None:
    parser = subparsers.add_parser("export", parents=[common],
                                   help="write the coset graph as edge list, graph6, sparse6 or JSON")
    parser.add_argument("--format", dest="fmt", type=ExportFormat, choices=list(ExportFormat),
                        default=ExportFormat.EDGE_LIST)
    parser.add_argument("--out", default=None, help="output path (default: inside the cache directory)")
    parser.set_defaults(handler=run)


def run(toolkit, args) -> int:
    construction: Construction = toolkit.construction()
    ensure_cache_consistent(construction)
    out = args.out or os.path.join(Config.CACHE_DIR, f"delta-{construction.modulus:#x}{args.fmt.suffix}")
    try:
        path = export_graph(construction.graph, args.fmt, out)
    except OSError as e:
        raise OSError(f"cannot write {out}: {e.strerror or e}") from e
    graph = construction.graph
    toolkit.emit(f"📦 {args.fmt.value}: {path} ({graph.num_vertices} vertices, {graph.num_edges} edges)",
                 {"format": args.fmt.value, "path": path, "vertices": graph.num_vertices, "edges": graph.num_edges})
    return 0
