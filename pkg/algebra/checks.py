from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class ItemCheck:
    key: str
    statement: str
    passed: bool
    witness: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CheckBundle:
    """Named list of item checks; passes when every item passes."""

    name: str
    items: List[ItemCheck] = field(default_factory=list)

    def add(self, key: str, statement: str, passed: bool, **witness: Any) -> ItemCheck:
        item = ItemCheck(key, statement, bool(passed), dict(witness))
        self.items.append(item)
        return item

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def failed(self) -> List[str]:
        return [item.key for item in self.items if not item.passed]

    def witness(self) -> Dict[str, Any]:
        return {item.key: {"passed": item.passed, **item.witness} for item in self.items}
