"""Word-analogy scoring over trained vectors.

Questions "a is to b as c is to ?" are answered by the vector-offset rule:
with all stored vectors L2-normalized once at load, the answer is the
vocabulary word (excluding a, b, c) whose vector has the largest dot
product with v_b - v_a + v_c.  Sections whose name starts with "gram"
count as syntactic, the rest as semantic; questions containing any
out-of-vocabulary word are skipped and counted.  Token matching is
case-sensitive; question files are expected to match the corpus casing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OOVWordError, ParseError

Question = tuple[str, str, str, str]

SYNTACTIC_PREFIX = "gram"

# score-matrix entry budget per GEMM block (~a quarter GB of float64)
_SCORE_BUDGET = 1 << 25


@dataclass
class AnalogySet:
    """Questions grouped into named sections."""

    sections: list[tuple[str, list[Question]]]

    @property
    def n_questions(self) -> int:
        return sum(len(qs) for _, qs in self.sections)

    @staticmethod
    def is_syntactic(section_name: str) -> bool:
        return section_name.startswith(SYNTACTIC_PREFIX)


@dataclass
class EvalReport:
    """Per-category tallies; attempted = questions with no OOV word."""

    semantic_correct: int = 0
    semantic_attempted: int = 0
    syntactic_correct: int = 0
    syntactic_attempted: int = 0
    skipped: int = 0

    @property
    def total_correct(self) -> int:
        return self.semantic_correct + self.syntactic_correct

    @property
    def total_attempted(self) -> int:
        return self.semantic_attempted + self.syntactic_attempted

    @staticmethod
    def _pct(correct: int, attempted: int) -> float:
        return 100.0 * correct / attempted if attempted else 0.0

    @property
    def semantic_accuracy(self) -> float:
        return self._pct(self.semantic_correct, self.semantic_attempted)

    @property
    def syntactic_accuracy(self) -> float:
        return self._pct(self.syntactic_correct, self.syntactic_attempted)

    @property
    def total_accuracy(self) -> float:
        return self._pct(self.total_correct, self.total_attempted)

    def format_lines(self) -> list[str]:
        return [
            f"semantic {self.semantic_accuracy:.2f} "
            f"({self.semantic_correct}/{self.semantic_attempted})",
            f"syntactic {self.syntactic_accuracy:.2f} "
            f"({self.syntactic_correct}/{self.syntactic_attempted})",
            f"total {self.total_accuracy:.2f} "
            f"({self.total_correct}/{self.total_attempted})",
            f"skipped {self.skipped}",
        ]


def load_analogies(path) -> AnalogySet:
    """Parse a questions file: ": section-name" headers, then 4-token lines.

    Malformed lines (wrong token count, blank, questions before any
    header) raise ParseError with the offending line number.
    """
    sections: list[tuple[str, list[Question]]] = []
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line.startswith(":"):
                name = line[1:].strip()
                if not name:
                    raise ParseError(f"{path}:{ln}: section header without a name")
                sections.append((name, []))
                continue
            tokens = line.split()
            if len(tokens) != 4:
                raise ParseError(
                    f"{path}:{ln}: expected 4 tokens, got {len(tokens)}"
                )
            if not sections:
                raise ParseError(f"{path}:{ln}: question before any section header")
            sections[-1][1].append(tuple(tokens))
    return AnalogySet(sections)


class WordVectors:
    """Vocabulary-ordered vectors, L2-normalized at construction."""

    def __init__(self, tokens: list[str], matrix: np.ndarray) -> None:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != len(tokens):
            raise ValueError("need one vector row per token")
        norms = np.linalg.norm(matrix, axis=1, keepdims=True)
        # an all-zero vector stays zero rather than becoming NaN
        np.maximum(norms, np.finfo(np.float64).tiny, out=norms)
        self.tokens = list(tokens)
        self.matrix = matrix / norms
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("duplicate token in vector set")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @classmethod
    def load(cls, path) -> "WordVectors":
        """Read a "token v_1 ... v_d" text file written by the trainer."""
        tokens: list[str] = []
        rows: list[np.ndarray] = []
        seen: set[str] = set()
        dim = -1
        with open(path, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, start=1):
                parts = raw.rstrip("\n").split(" ")
                if len(parts) < 2:
                    raise ParseError(f"{path}:{ln}: expected a token and values")
                try:
                    row = np.array([float(v) for v in parts[1:]], dtype=np.float64)
                except ValueError as exc:
                    raise ParseError(f"{path}:{ln}: bad value ({exc})") from None
                if dim == -1:
                    dim = row.size
                elif row.size != dim:
                    raise ParseError(
                        f"{path}:{ln}: expected {dim} values, got {row.size}"
                    )
                if parts[0] in seen:
                    raise ParseError(f"{path}:{ln}: duplicate token {parts[0]!r}")
                seen.add(parts[0])
                tokens.append(parts[0])
                rows.append(row)
        if not tokens:
            raise ParseError(f"{path}: no vectors found")
        return cls(tokens, np.vstack(rows))


def answer_analogy(vectors: WordVectors, a: str, b: str, c: str) -> str:
    """Best non-query word for "a : b :: c : ?" by the offset rule.

    Ties break toward the lowest vocabulary rank.
    """
    try:
        ia, ib, ic = vectors.index[a], vectors.index[b], vectors.index[c]
    except KeyError as exc:
        raise OOVWordError(f"word not in vocabulary: {exc.args[0]}") from None
    m = vectors.matrix
    target = m[ib] - m[ia] + m[ic]
    scores = m @ target
    scores[[ia, ib, ic]] = -np.inf
    return vectors.tokens[int(np.argmax(scores))]


def _score_block(vectors: WordVectors, quad_idx: np.ndarray) -> np.ndarray:
    """Predicted word index per question row (a,b,c,d index quadruples)."""
    m = vectors.matrix
    ia, ib, ic = quad_idx[:, 0], quad_idx[:, 1], quad_idx[:, 2]
    targets = m[ib] - m[ia] + m[ic]
    scores = targets @ m.T
    rows = np.arange(quad_idx.shape[0])
    scores[rows, ia] = -np.inf
    scores[rows, ib] = -np.inf
    scores[rows, ic] = -np.inf
    return np.argmax(scores, axis=1)


def evaluate(vectors: WordVectors, analogies: AnalogySet) -> EvalReport:
    """Score every section; OOV questions are skipped and counted.

    Questions are scored in blocks with one matrix product per block,
    applying the same exclusion and first-index tie-break as
    answer_analogy.
    """
    report = EvalReport()
    index = vectors.index
    block = max(1, _SCORE_BUDGET // max(1, len(vectors)))
    for name, questions in analogies.sections:
        if not questions:
            continue
        quads: list[tuple[int, int, int, int]] = []
        for q in questions:
            try:
                quads.append(tuple(index[w] for w in q))
            except KeyError:
                report.skipped += 1
        if not quads:
            continue
        quad_idx = np.asarray(quads, dtype=np.int64)
        correct = 0
        for start in range(0, quad_idx.shape[0], block):
            part = quad_idx[start : start + block]
            pred = _score_block(vectors, part)
            correct += int(np.sum(pred == part[:, 3]))
        if AnalogySet.is_syntactic(name):
            report.syntactic_correct += correct
            report.syntactic_attempted += len(quads)
        else:
            report.semantic_correct += correct
            report.semantic_attempted += len(quads)
    return report
