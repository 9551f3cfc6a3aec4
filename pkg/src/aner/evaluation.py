"""Entity-level precision/recall/F1 against a gold corpus.

Matching is strict: a predicted span counts as a true positive only if
a gold span with the same class and the same inclusive word range
exists in the same sentence. No credit for partial overlap. Metrics
are percentages; the zero-denominator conventions (documented on
``score``) make every value well defined on any input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus
from .errors import CorpusAlignmentError
from .tags import decode_spans

SpanKey = tuple[str, int, int]  # (class, word_start, word_end)


@dataclass(frozen=True)
class Metrics:
    """Percentages in [0, 100]."""

    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ClassMetrics(Metrics):
    support: int  # gold spans of this class
    predicted: int  # predicted spans of this class


@dataclass(frozen=True)
class EvalReport:
    micro: Metrics
    per_class: dict[str, ClassMetrics]  # iteration order = report column order
    true_positives: int
    false_positives: int
    false_negatives: int


def _metrics(tp: int, fp: int, fn: int) -> Metrics:
    precision = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Metrics(precision, recall, f1)


def _span_keys(sentence) -> set[SpanKey]:
    return {(s.entity_class, s.word_start, s.word_end) for s in decode_spans(sentence)}


def _check_aligned(gold: Corpus, predicted: Corpus):
    if len(gold) != len(predicted):
        raise CorpusAlignmentError(
            f"gold has {len(gold)} sentences but predicted has {len(predicted)}"
        )
    for i, (g, p) in enumerate(zip(gold.sentences, predicted.sentences)):
        if g.words != p.words:
            raise CorpusAlignmentError(
                f"sentence {i}: word sequences differ "
                f"({' '.join(g.words)!r} vs {' '.join(p.words)!r})"
            )


def score(gold: Corpus, predicted: Corpus) -> EvalReport:
    """Score predictions sentence by sentence with strict span matching.

    Conventions when a denominator is zero: precision is 0 with no
    predictions, recall is 0 with no gold spans, and F1 is 0 when
    precision + recall is 0. Micro metrics come from summed counts;
    per-class metrics from counts restricted to that class. The
    per-class order is gold support descending (name breaks ties).
    """
    _check_aligned(gold, predicted)
    tp: dict[str, int] = {}
    fp: dict[str, int] = {}
    fn: dict[str, int] = {}

    def bump(counter: dict[str, int], keys):
        for entity_class, _, _ in keys:
            counter[entity_class] = counter.get(entity_class, 0) + 1

    for g, p in zip(gold.sentences, predicted.sentences):
        gold_keys = _span_keys(g)
        predicted_keys = _span_keys(p)
        bump(tp, gold_keys & predicted_keys)
        bump(fp, predicted_keys - gold_keys)
        bump(fn, gold_keys - predicted_keys)

    classes = set(tp) | set(fp) | set(fn)
    support = {c: tp.get(c, 0) + fn.get(c, 0) for c in classes}
    per_class: dict[str, ClassMetrics] = {}
    for c in sorted(classes, key=lambda c: (-support[c], c)):
        base = _metrics(tp.get(c, 0), fp.get(c, 0), fn.get(c, 0))
        per_class[c] = ClassMetrics(
            precision=base.precision,
            recall=base.recall,
            f1=base.f1,
            support=support[c],
            predicted=tp.get(c, 0) + fp.get(c, 0),
        )

    total_tp, total_fp, total_fn = sum(tp.values()), sum(fp.values()), sum(fn.values())
    return EvalReport(
        micro=_metrics(total_tp, total_fp, total_fn),
        per_class=per_class,
        true_positives=total_tp,
        false_positives=total_fp,
        false_negatives=total_fn,
    )


def score_against_oracle(gold: Corpus, predicted: Corpus) -> bool:
    """Cross-check ``score`` against a plain quadratic matcher.

    The oracle walks every predicted span and scans the same sentence's
    gold spans for an unused exact (class, start, end) triple. Meant
    for small test instances; not part of normal scoring.
    """
    report = score(gold, predicted)
    tp = fp = 0
    gold_total = 0
    for g, p in zip(gold.sentences, predicted.sentences):
        gold_spans = decode_spans(g)
        gold_total += len(gold_spans)
        used = [False] * len(gold_spans)
        for span in decode_spans(p):
            hit = False
            for j, gold_span in enumerate(gold_spans):
                if used[j]:
                    continue
                if (
                    span.entity_class == gold_span.entity_class
                    and span.word_start == gold_span.word_start
                    and span.word_end == gold_span.word_end
                ):
                    used[j] = True
                    hit = True
                    break
            tp += hit
            fp += not hit
    fn = gold_total - tp

    precision = 100.0 * tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return (
        (report.true_positives, report.false_positives, report.false_negatives)
        == (tp, fp, fn)
        and (report.micro.precision, report.micro.recall, report.micro.f1)
        == (precision, recall, f1)
    )


def _one_decimal(value: float) -> str:
    return f"{value:.1f}"


def render_report(report: EvalReport) -> str:
    """Fixed-width table: Recall/Precision/F1 rows, micro column first."""
    headers = ["micro", *report.per_class.keys()]
    columns = [report.micro, *report.per_class.values()]
    rows = [
        ("Recall", [m.recall for m in columns]),
        ("Precision", [m.precision for m in columns]),
        ("F1", [m.f1 for m in columns]),
    ]
    label_width = max(len(name) for name, _ in rows)
    widths = [max(len(h), 5) for h in headers]
    lines = [
        " ".join([" " * label_width] + [h.rjust(w) for h, w in zip(headers, widths)])
    ]
    for name, values in rows:
        cells = [_one_decimal(v).rjust(w) for v, w in zip(values, widths)]
        lines.append(" ".join([name.ljust(label_width)] + cells))
    return "\n".join(lines) + "\n"


def export_report(report: EvalReport) -> str:
    """Machine-readable form: one ``key=value`` line per metric."""
    lines = [
        f"counts.tp={report.true_positives}",
        f"counts.fp={report.false_positives}",
        f"counts.fn={report.false_negatives}",
        f"micro.precision={_one_decimal(report.micro.precision)}",
        f"micro.recall={_one_decimal(report.micro.recall)}",
        f"micro.f1={_one_decimal(report.micro.f1)}",
    ]
    for name, m in report.per_class.items():
        lines.append(f"class.{name}.precision={_one_decimal(m.precision)}")
        lines.append(f"class.{name}.recall={_one_decimal(m.recall)}")
        lines.append(f"class.{name}.f1={_one_decimal(m.f1)}")
        lines.append(f"class.{name}.support={m.support}")
        lines.append(f"class.{name}.predicted={m.predicted}")
    return "\n".join(lines) + "\n"
