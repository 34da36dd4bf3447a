from algebra.gf64 import GF64


def add_parser(subparsers, common) -> None:
    parser = subparsers.add_parser("field-table", parents=[common],
                                   help="dump the GF(64) antilog table")
    parser.set_defaults(handler=run)


def run(toolkit, args) -> int:
    field = GF64(toolkit.modulus)
    table = field.antilog_table()
    lines = [f"modulus {toolkit.modulus:#b}; zeta = x, beta = zeta^7, alpha = zeta^21"]
    lines += [f"zeta^{i:<2} = {value:#04x}  {value:06b}" for i, value in table]
    toolkit.emit("\n".join(lines), {"modulus": toolkit.modulus, "antilog": [value for _, value in table]})
    return 0
