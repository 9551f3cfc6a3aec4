"""Token classification backends and argmax decoding.

A classifier maps a tokenized sequence to a score matrix with one row
per token and one column per label in the inventory. Three backends
are provided: a hash-based mock (deterministic pseudo-random labels,
for tests and latency work), a gazetteer (longest-match lexicon, which
makes the demo meaningful without trained weights), and an adapter for
externally trained weights. Scores are raw; only their per-row order
matters because decoding takes the best-scoring label.
"""

from __future__ import annotations

import json
import threading
import zlib
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ClassifierContractError, ModelLoadError
from .tags import LabelInventory, Tag, TagKind, build_label_inventory
from .tokenization import UNKNOWN_TOKEN, CONTINUATION_PREFIX, TokenizedSequence

CLASS_MANIFEST_NAME = "classes.txt"
SCORE_TABLE_NAME = "token_scores.npy"


class TokenClassifier(ABC):
    """Per-token label scorer.

    Implementations must be deterministic for fixed construction
    arguments and safe to call from concurrent threads (stateless, or
    internally serialized).
    """

    def __init__(self, inventory: LabelInventory):
        self._inventory = inventory

    @property
    def inventory(self) -> LabelInventory:
        return self._inventory

    @abstractmethod
    def scores(self, sequence: TokenizedSequence) -> np.ndarray:
        """Return a (len(sequence), inventory.size) float matrix."""


def scores_to_tags(scores: np.ndarray, inventory: LabelInventory) -> list[Tag]:
    """Pick the best decodable label per position.

    The ignore label never wins (it is a sub-token bookkeeping device,
    not a prediction), and ties go to the lowest label index.
    """
    scores = np.asarray(scores)
    if scores.ndim != 2 or scores.shape[1] != inventory.size:
        raise ClassifierContractError(
            f"expected scores of width {inventory.size}, got shape {scores.shape}"
        )
    if not np.isfinite(scores).all():
        raise ClassifierContractError("scores must be finite")
    masked = scores.astype(float, copy=True)
    masked[:, inventory.ignore_id] = -np.inf
    return [inventory.id_to_tag(int(i)) for i in masked.argmax(axis=1)]


class MockHashClassifier(TokenClassifier):
    """Labels each position by a stable hash of (token id, position).

    The hash is CRC-32, not Python's built-in hash, so results are
    identical across processes and platforms. Useful for exercising
    the pipeline end to end with reproducible pseudo-random output.
    """

    def __init__(self, inventory: LabelInventory, seed: int = 0):
        super().__init__(inventory)
        self._seed = seed

    def scores(self, sequence: TokenizedSequence) -> np.ndarray:
        out = np.zeros((len(sequence), self.inventory.size))
        for position, token_id in enumerate(sequence.ids):
            key = f"{token_id}:{position}:{self._seed}".encode()
            out[position, zlib.crc32(key) % self.inventory.decodable_count] = 1.0
        return out


def load_gazetteer(source: Union[str, Path, Iterable[str]]) -> dict[tuple[str, ...], str]:
    """Read a lexicon (``surface<TAB>ClassName`` per line, ``#`` comments).

    Multi-word surfaces are split on spaces and matched word by word.
    """
    if isinstance(source, Path):
        lines: Iterable[str] = source.read_text(encoding="utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source
    lexicon: dict[tuple[str, ...], str] = {}
    for raw_line in lines:
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ClassifierContractError(f"bad lexicon line {raw_line!r}")
        key = tuple(parts[0].split())
        if key in lexicon:
            raise ClassifierContractError(f"duplicate lexicon surface {parts[0]!r}")
        lexicon[key] = parts[1].strip()
    return lexicon


class GazetteerClassifier(TokenClassifier):
    """Longest-match lexicon lookup emitting one-hot B/I scores.

    Words are rebuilt from their pieces (continuation prefixes
    stripped), then scanned left to right; at each position the longest
    lexicon entry wins and the scan resumes after it. Matched words'
    sub-tokens score B on the very first piece and I elsewhere;
    everything else scores O. Words that tokenized to the unknown
    token cannot match (their surface is gone).
    """

    def __init__(self, inventory: LabelInventory, lexicon: dict[tuple[str, ...], str]):
        super().__init__(inventory)
        for surface, entity_class in lexicon.items():
            if not surface or any(not w for w in surface):
                raise ClassifierContractError(f"empty lexicon surface: {surface!r}")
            if entity_class not in inventory.classes:
                raise ClassifierContractError(
                    f"lexicon class {entity_class!r} is not in the label inventory"
                )
        self._lexicon = dict(lexicon)
        self._max_entry = max((len(k) for k in lexicon), default=0)

    @staticmethod
    def _rebuild_words(sequence: TokenizedSequence) -> tuple[list[str], list[list[int]]]:
        words: list[str] = []
        positions: list[list[int]] = []
        prev: int | None = None
        for pos, (token, wi) in enumerate(zip(sequence.tokens, sequence.word_index)):
            if wi is None:
                continue
            if wi != prev:
                words.append("")
                positions.append([])
                prev = wi
            positions[-1].append(pos)
            if token == UNKNOWN_TOKEN:
                words[-1] = UNKNOWN_TOKEN
            elif token.startswith(CONTINUATION_PREFIX) and len(positions[-1]) > 1:
                words[-1] += token[len(CONTINUATION_PREFIX):]
            else:
                words[-1] += token
        return words, positions

    def scores(self, sequence: TokenizedSequence) -> np.ndarray:
        out = np.zeros((len(sequence), self.inventory.size))
        out[:, self.inventory.tag_to_id(Tag(TagKind.OUTSIDE))] = 1.0
        words, positions = self._rebuild_words(sequence)
        i = 0
        while i < len(words):
            matched = 0
            for length in range(min(self._max_entry, len(words) - i), 0, -1):
                entity_class = self._lexicon.get(tuple(words[i : i + length]))
                if entity_class is not None:
                    matched = length
                    break
            if not matched:
                i += 1
                continue
            begin_id = self.inventory.tag_to_id(Tag.begin(entity_class))
            inside_id = self.inventory.tag_to_id(Tag.inside(entity_class))
            first = True
            for word_positions in positions[i : i + matched]:
                for pos in word_positions:
                    out[pos] = 0.0
                    out[pos, begin_id if first else inside_id] = 1.0
                    first = False
            i += matched
        return out


def _read_manifest(directory: Path) -> LabelInventory:
    manifest = directory / CLASS_MANIFEST_NAME
    if not manifest.is_file():
        raise ModelLoadError(f"missing class manifest {manifest}")
    classes = [line.strip() for line in manifest.read_text(encoding="utf-8").splitlines()]
    return build_label_inventory([c for c in classes if c])


class TokenScoreTableClassifier(TokenClassifier):
    """External-weights adapter: a per-token-id score lookup table.

    Format: a directory holding ``classes.txt`` (one entity class per
    line, defining the inventory order) and ``token_scores.npy``, a
    (vocabulary size, inventory size) float matrix. Row t is the score
    vector for token id t regardless of context.
    """

    def __init__(self, inventory: LabelInventory, table: np.ndarray):
        super().__init__(inventory)
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or table.shape[1] != inventory.size:
            raise ModelLoadError(
                f"score table width {table.shape[-1] if table.ndim else '?'} "
                f"does not match inventory size {inventory.size}"
            )
        if not np.isfinite(table).all():
            raise ModelLoadError("score table must be finite")
        self._table = table

    def scores(self, sequence: TokenizedSequence) -> np.ndarray:
        ids = np.asarray(sequence.ids)
        if ids.max(initial=0) >= len(self._table):
            raise ClassifierContractError(
                f"token id {int(ids.max())} outside score table of {len(self._table)} rows"
            )
        return self._table[ids]


class TransformersClassifier(TokenClassifier):
    """External-weights adapter for transformer token-classification
    checkpoints (directory with ``config.json`` plus weights).

    Requires the optional ``transformers`` extra. Model outputs are
    re-ordered into this package's label indexing by parsing the
    checkpoint's label names; checkpoints without usable names are
    assumed to already follow it. Access is serialized internally, so
    instances are safe to share across threads.
    """

    def __init__(self, path: Path, inventory: LabelInventory):
        super().__init__(inventory)
        try:
            import torch
            from transformers import AutoModelForTokenClassification
        except ImportError as exc:
            raise ModelLoadError(
                "transformer checkpoints need the optional 'transformers' extra installed"
            ) from exc
        self._torch = torch
        self._model = AutoModelForTokenClassification.from_pretrained(path)
        self._model.eval()
        self._lock = threading.Lock()

        num_labels = int(self._model.config.num_labels)
        if num_labels != inventory.size:
            raise ModelLoadError(
                f"checkpoint has {num_labels} outputs but the inventory needs {inventory.size}"
            )
        self._permutation = self._column_order(self._model.config, inventory)

    @staticmethod
    def _column_order(config, inventory: LabelInventory) -> np.ndarray | None:
        """Map checkpoint output columns onto inventory label ids."""
        id2label = getattr(config, "id2label", None) or {}
        names = {int(k): str(v) for k, v in id2label.items()}
        if any(v.upper().startswith("LABEL_") for v in names.values()) or not names:
            return None
        order = np.empty(inventory.size, dtype=int)
        seen: set[int] = set()
        for model_id, name in names.items():
            try:
                our_id = inventory.tag_to_id(Tag.parse(name))
            except Exception as exc:
                raise ModelLoadError(f"checkpoint label {name!r} not in inventory") from exc
            if our_id in seen:
                raise ModelLoadError(f"checkpoint maps two outputs to label {name!r}")
            seen.add(our_id)
            order[our_id] = model_id
        if len(seen) != inventory.size:
            raise ModelLoadError("checkpoint label names do not cover the inventory")
        return order

    def scores(self, sequence: TokenizedSequence) -> np.ndarray:
        torch = self._torch
        with self._lock, torch.no_grad():
            logits = self._model(
                input_ids=torch.tensor([list(sequence.ids)]),
                attention_mask=torch.tensor([list(sequence.mask)]),
            ).logits[0].cpu().numpy()
        return logits[:, self._permutation] if self._permutation is not None else logits


def load_external_model(path: Union[str, Path]) -> TokenClassifier:
    """Load trained weights from a directory in a supported format.

    Both formats carry a ``classes.txt`` manifest naming the entity
    classes in order; the weights are either a ``token_scores.npy``
    lookup table or a transformer checkpoint (``config.json``).
    """
    directory = Path(path)
    if not directory.is_dir():
        raise ModelLoadError(f"model path {directory} is not a directory")
    inventory = _read_manifest(directory)
    score_table = directory / SCORE_TABLE_NAME
    if score_table.is_file():
        return TokenScoreTableClassifier(inventory, np.load(score_table))
    if (directory / "config.json").is_file():
        return TransformersClassifier(directory, inventory)
    raise ModelLoadError(
        f"{directory} holds neither {SCORE_TABLE_NAME} nor a transformer checkpoint"
    )
