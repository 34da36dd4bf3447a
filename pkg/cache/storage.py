import csv
import json
import logging
import os
import struct
from typing import BinaryIO, Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from algebra.coset import CosetGraph
from algebra.errors import CacheMismatchError

from .models import ExportFormat, GraphHeader, VerificationReport

logger = logging.getLogger("delta_amalgam.storage")

MAGIC = b"DLTA"
FORMAT_VERSION = 1
# magic, version, modulus, sha256 of the group data, vertices, edges
HEADER = struct.Struct("<4sHQ32sQQ")
GRAPH6_CHUNK = 1 << 24


class GraphStorage:
    """Binary cache of the coset graph keyed by modulus."""

    def __init__(self, directory: str):
        self.directory = directory

    def path_for(self, modulus: int) -> str:
        return os.path.join(self.directory, f"delta-{modulus:#x}.bin")

    def save_graph(self, graph: CosetGraph, modulus: int, group_hash: str) -> str:
        os.makedirs(self.directory, exist_ok=True)
        path = self.path_for(modulus)
        edges = graph.edge_array().astype(np.int64)
        tmp = path + ".tmp"
        with open(tmp, "wb") as f:
            f.write(HEADER.pack(MAGIC, FORMAT_VERSION, modulus, bytes.fromhex(group_hash),
                                graph.num_vertices, edges.shape[0]))
            f.write(graph.sides.astype(np.int8).tobytes())
            f.write(graph.reps.astype(np.int64).tobytes())
            f.write(edges.tobytes())
        os.replace(tmp, path)
        logger.info(f"graph cache written to {path}")
        return path

    def read_header(self, f: BinaryIO) -> GraphHeader:
        raw = f.read(HEADER.size)
        if len(raw) != HEADER.size:
            raise CacheMismatchError("graph cache is truncated")
        magic, version, modulus, digest, n, m = HEADER.unpack(raw)
        if magic != MAGIC:
            raise CacheMismatchError("graph cache has a foreign file signature")
        return GraphHeader(version=version, modulus=modulus, group_hash=digest.hex(), num_vertices=n, num_edges=m)

    def load_graph(self, modulus: int, group_hash: str) -> Optional[CosetGraph]:
        """Cached graph, None when absent; CacheMismatchError when present but stale."""
        path = self.path_for(modulus)
        if not os.path.exists(path):
            logger.info(f"no graph cache at {path}")
            return None
        with open(path, "rb") as f:
            header = self.read_header(f)
            if header.version != FORMAT_VERSION:
                raise CacheMismatchError(f"{path}: format version {header.version}, expected {FORMAT_VERSION}")
            if header.modulus != modulus:
                raise CacheMismatchError(f"{path}: modulus {header.modulus:#x}, expected {modulus:#x}")
            if header.group_hash != group_hash:
                raise CacheMismatchError(f"{path}: group data hash differs from the running build")
            n, m = header.num_vertices, header.num_edges
            sides = np.frombuffer(f.read(n), dtype=np.int8).copy()
            reps = np.frombuffer(f.read(8 * n), dtype=np.int64).copy()
            edges = np.frombuffer(f.read(16 * m), dtype=np.int64).reshape(m, 2).copy()
        if sides.size != n or reps.size != n:
            raise CacheMismatchError(f"{path}: truncated vertex blocks")
        logger.info(f"graph cache hit: {path}")
        return CosetGraph.from_edges(sides, reps, edges)

    def clear(self, modulus: int) -> None:
        path = self.path_for(modulus)
        if os.path.exists(path):
            os.remove(path)


class ReportStorage:
    def __init__(self, directory: str):
        self.directory = directory

    def save_report(self, report: VerificationReport, name: str = "report") -> str:
        os.makedirs(self.directory, exist_ok=True)
        path = os.path.join(self.directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as f:
            f.write(report.model_dump_json(indent=2))
        with open(os.path.join(self.directory, f"{name}.schema.json"), "w", encoding="utf-8") as f:
            json.dump(VerificationReport.model_json_schema(), f, ensure_ascii=False, indent=2)
        logger.info(f"report saved to {path}")
        return path

    def load_report(self, name: str = "report") -> Optional[VerificationReport]:
        path = os.path.join(self.directory, f"{name}.json")
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as f:
            return VerificationReport.model_validate_json(f.read())


# --- exports -------------------------------------------------------------------------------


def graph6_size_bytes(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> shift) & 63) + 63 for shift in (12, 6, 0)])
    return bytes([126, 126] + [((n >> shift) & 63) + 63 for shift in (30, 24, 18, 12, 6, 0)])


def write_graph6(out: BinaryIO, n: int, edges: np.ndarray, chunk: int = GRAPH6_CHUNK) -> None:
    """graph6 without header, streamed in chunks of 6-bit characters.

    Bit for the pair i < j sits at position j(j-1)/2 + i of the upper triangle read column by column.
    """
    out.write(graph6_size_bytes(n))
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    lo, hi = edges.min(axis=1), edges.max(axis=1)
    positions = np.sort(hi * (hi - 1) // 2 + lo)
    total_chars = -(-(n * (n - 1) // 2) // 6)
    char_index = positions // 6
    bit_value = (1 << (5 - positions % 6)).astype(np.uint8)
    cursor = 0
    for start in range(0, total_chars, chunk):
        stop = min(start + chunk, total_chars)
        block = np.zeros(stop - start, dtype=np.uint8)
        end = int(np.searchsorted(char_index, stop, side="left"))
        np.bitwise_or.at(block, char_index[cursor:end] - start, bit_value[cursor:end])
        cursor = end
        block += 63
        out.write(block.tobytes())
    out.write(b"\n")


def to_networkx(graph: CosetGraph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(graph.num_vertices))
    G.add_edges_from(graph.edge_array().tolist())
    return G


def export_graph(graph: CosetGraph, fmt: ExportFormat, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    edges = graph.edge_array()
    if fmt is ExportFormat.EDGE_LIST:
        np.savetxt(path, edges, fmt="%d", delimiter=" ")
    elif fmt is ExportFormat.GRAPH6:
        with open(path, "wb") as f:
            write_graph6(f, graph.num_vertices, edges)
    elif fmt is ExportFormat.SPARSE6:
        nx.write_sparse6(to_networkx(graph), path, header=False)
    else:
        payload = {
            "num_vertices": graph.num_vertices,
            "num_edges": graph.num_edges,
            "vertices": [{"id": v, "side": int(s), "rep": f"{int(r):#x}"}
                         for v, (s, r) in enumerate(zip(graph.sides.tolist(), graph.reps.tolist()))],
            "edges": edges.tolist(),
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f)
    logger.info(f"exported {fmt.value} to {path}")
    return path


ORBIT_COLUMNS = ("group", "side", "vertex", "s", "arcs", "orbits", "sizes")


def write_orbit_table(path: str, rows: Iterable[Sequence[object]]) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(ORBIT_COLUMNS)
        writer.writerows(rows)
    logger.info(f"orbit table written to {path}")
    return path
