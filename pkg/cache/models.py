from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"
    SKIPPED = "skipped"


class GroupScope(str, Enum):
    H = "H"
    K = "K"
    BOTH = "both"

    def includes(self, group: Optional[str]) -> bool:
        return group is None or self is GroupScope.BOTH or self.value == group


class ExportFormat(str, Enum):
    EDGE_LIST = "edge-list"
    GRAPH6 = "graph6"
    SPARSE6 = "sparse6"
    JSON = "json"

    @property
    def suffix(self) -> str:
        return {"edge-list": ".edges", "graph6": ".g6", "sparse6": ".s6", "json": ".json"}[self.value]


class ClaimRecord(BaseModel):
    claim_id: str
    label: str = ""
    statement: str
    group: Optional[str] = None
    verdict: Verdict
    witness: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None
    wall_time: float = 0.0


class EnvironmentBlock(BaseModel):
    modulus: int
    modulus_bits: str
    commutator_convention: Optional[str] = None
    composition: str = "row vectors, left factor applied first"
    conjugation: str = "x^g = g^-1 x g"
    group_hash: Optional[str] = None
    threads: int = 1
    versions: Dict[str, str] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    model_config = ConfigDict(use_enum_values=False)

    environment: EnvironmentBlock
    claims: List[ClaimRecord] = Field(default_factory=list)
    overall: Verdict = Verdict.PASS
    notes: List[str] = Field(default_factory=list)
    generated_at: datetime = Field(default_factory=datetime.now)
    wall_time: float = 0.0
    coverage: List[str] = Field(default_factory=list)

    def coverage_gaps(self) -> List[str]:
        """Ids from the coverage manifest not reported exactly once."""
        ids = [c.claim_id for c in self.claims]
        return [i for i in self.coverage if ids.count(i) != 1]

    def finalize(self) -> "VerificationReport":
        gaps = self.coverage_gaps()
        if gaps:
            self.notes.append(f"coverage gaps: {', '.join(gaps)}")
        failed = bool(gaps) or any(c.verdict is Verdict.FAIL for c in self.claims)
        self.overall = Verdict.FAIL if failed else Verdict.PASS
        return self

    def by_id(self) -> Dict[str, ClaimRecord]:
        return {c.claim_id: c for c in self.claims}

    def failed(self) -> List[ClaimRecord]:
        return [c for c in self.claims if c.verdict is Verdict.FAIL]

    def counts(self) -> Dict[str, int]:
        result = {v.value: 0 for v in Verdict}
        for c in self.claims:
            result[c.verdict.value] += 1
        return result


class GraphHeader(BaseModel):
    """Fixed part of the binary graph cache."""

    version: int
    modulus: int
    group_hash: str
    num_vertices: int
    num_edges: int
