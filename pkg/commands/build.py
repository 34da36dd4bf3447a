from services import Construction, ensure_cache_consistent, format_build


def add_parser(subparsers, common) -> None:
    parser = subparsers.add_parser("build", parents=[common],
                                   help="build field tables, groups and the coset graph; write the cache")
    parser.set_defaults(handler=run)


def run(toolkit, args) -> int:
    construction: Construction = toolkit.construction()
    ensure_cache_consistent(construction)
    relations = construction.relations
    graph = construction.graph
    counts = graph.side_counts
    payload = {
        "modulus": construction.modulus,
        "commutator_convention": relations.convention.value,
        "source": construction.graph_source,
        "cache": construction.storage.path_for(construction.modulus),
        "vertices": graph.num_vertices,
        "side_counts": {int(side): n for side, n in counts.items()},
        "edges": graph.num_edges,
        "group_order": {"H": construction.group_order("H"), "K": construction.group_order("K")},
    }
    toolkit.emit(format_build(construction), payload)
    return 0
