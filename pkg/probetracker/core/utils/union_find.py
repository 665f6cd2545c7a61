"""
Disjoint-set forest used for transitive-closure clustering.
"""
from typing import Dict, Iterable, List


class UnionFind:
    """
    Union-Find with path halving and union by rank over elements 0..n-1.
    """

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """
        Merge the sets containing x and y.

        Returns:
            True if two distinct sets were merged
        """
        (px, py) = (self.find(x), self.find(y))
        if px == py:
            return False
        if self.rank[px] < self.rank[py]:
            (px, py) = (py, px)
        self.parent[py] = px
        if self.rank[px] == self.rank[py]:
            self.rank[px] += 1
        return True

    def union_all(self, members: Iterable[int]) -> None:
        members = iter(members)
        first = next(members, None)
        if first is None:
            return
        for other in members:
            self.union(first, other)

    def groups(self) -> List[List[int]]:
        """
        Sets as sorted member lists, ordered by their smallest member.
        """
        result: Dict[int, List[int]] = {}
        for i in range(len(self.parent)):
            result.setdefault(self.find(i), []).append(i)
        return sorted(result.values(), key=lambda members: members[0])
