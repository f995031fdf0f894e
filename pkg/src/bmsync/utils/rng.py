"""
随机数流 - 基于计数器的 Philox 生成器，按 (主种子, 路径..., 流标签) 派生独立流
"""
import hashlib
from typing import Union

import numpy as np

SeedPart = Union[int, str]

_MASK64 = (1 << 64) - 1


def _to_word(part: SeedPart) -> int:
    """把种子分量转换为 64 位整数；字符串通过 blake2b 哈希得到稳定编号"""
    if isinstance(part, bool):
        raise TypeError("Seed parts must be int or str, not bool")
    if isinstance(part, int):
        if part < 0:
            raise ValueError(f"Seed parts must be non-negative, got {part}")
        return part & _MASK64
    digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, *path: SeedPart) -> int:
    """从主种子和路径派生一个新的 64 位种子"""
    words = [_to_word(seed)] + [_to_word(p) for p in path]
    seq = np.random.SeedSequence(entropy=words)
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *path: SeedPart) -> np.random.Generator:
    """构造 Philox 计数器生成器；相同 (seed, path) 总是得到相同的流"""
    words = [_to_word(seed)] + [_to_word(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=words)))
