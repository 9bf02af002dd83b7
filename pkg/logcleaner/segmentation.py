""" Clustering-based segmentation: split templates into operational and transactional by their mScore

Templates are clustered with 1-D mean-shift over their maximum dependency scores.
The cluster with the smallest score is operational; every other cluster is transactional.
When everything ends up in a single cluster, nothing is removed.
"""

from __future__ import annotations

import logging
from collections import abc
from dataclasses import dataclass
from typing import Union

import numpy as np

from logcleaner.dependency import ScoreMap, compute_mscore
from logcleaner.error import exc
from logcleaner.log import LogSet, TemplateId, remove_messages_of
from logcleaner.settings import BANDWIDTH_RULES


logger = logging.getLogger(__name__)

# A positive number, or the name of a rule: 'auto', 'range'
Bandwidth = Union[float, str]

# Convergence of mean-shift: stop when no point moves more than this, or after that many iterations
TOLERANCE = 1e-6
MAX_ITERATIONS = 500


@dataclass(frozen=True)
class Cluster:
    """ A cluster of templates """
    members: frozenset[TemplateId]

    # Converged mode
    center: float

    # Mean mScore of the members
    representative_score: float

    @property
    def sort_key(self) -> tuple[float, TemplateId]:
        """ Ascending score; ties go to the lexicographically smallest member """
        return (self.representative_score, min(self.members))


@dataclass(frozen=True)
class SegmentationResult:
    """ Clusters and the operational templates chosen from them """
    # Sorted by ascending representative score
    clusters: tuple[Cluster, ...]

    # Members of the lowest cluster; empty when degenerate
    operational: frozenset[TemplateId]

    # Only one cluster: nothing could be told apart
    degenerate: bool

    # The bandwidth the clusters were computed with
    bandwidth: float


@dataclass(frozen=True)
class DependencyResult:
    """ Result of the dependency analysis """
    # Operational templates
    operational: frozenset[TemplateId]

    # Logs without the entries of operational templates
    logs: LogSet

    # mScore of every template
    scores: ScoreMap

    segmentation: SegmentationResult


def estimate_bandwidth(scores: abc.Collection[float], rule: str = 'auto') -> float:
    """ Pick a mean-shift bandwidth for a set of scores

    Rules:
    * 'auto': max(0.02, 0.3 × median absolute deviation from the median)
    * 'range': max(0.01, 0.25 × (max - min)).
      Follows the spread between the noise and the functional scores,
      and stays wide enough to keep noise templates together when functional templates outnumber them.

    Raises:
        exc.E_ARGUMENT: unknown rule, or no scores
    """
    if rule not in BANDWIDTH_RULES:
        raise exc.E_ARGUMENT.format('Unknown bandwidth rule: {rule!r}', name='bandwidth', rule=rule)
    if not scores:
        raise exc.E_ARGUMENT('Cannot estimate a bandwidth without scores', name='scores')

    a = np.asarray(list(scores), dtype=float)
    if rule == 'auto':
        return max(0.02, 0.3 * float(np.median(np.abs(a - np.median(a)))))
    else:
        return max(0.01, 0.25 * float(a.max() - a.min()))


def resolve_bandwidth(bandwidth: Bandwidth, scores: abc.Collection[float]) -> float:
    """ Turn a bandwidth setting into a number

    Raises:
        exc.E_ARGUMENT: not a positive number nor a known rule
    """
    if isinstance(bandwidth, str):
        return estimate_bandwidth(scores, bandwidth)
    if not bandwidth > 0:
        raise exc.E_ARGUMENT.format('Bandwidth must be positive, got {value!r}', name='bandwidth', value=bandwidth)
    return float(bandwidth)


def mean_shift_1d(values: abc.Mapping[TemplateId, float], bandwidth: float, *,
                  tol: float = TOLERANCE, max_iter: int = MAX_ITERATIONS) -> list[Cluster]:
    """ Mean-shift clustering of 1-D values with a flat kernel

    Every point repeatedly moves to the mean of all input values within ±bandwidth of its position,
    until no point moves more than `tol`, or after `max_iter` iterations.
    Points whose modes are closer than bandwidth/2 to a cluster's center join it,
    as long as every member value stays within one bandwidth of that center.

    Deterministic: the result does not depend on the iteration order of `values`.

    Returns:
        Clusters, sorted by ascending representative score

    Raises:
        exc.E_ARGUMENT: empty input, or non-positive bandwidth
    """
    if not values:
        raise exc.E_ARGUMENT('Cannot cluster an empty set of values', name='values')
    if not bandwidth > 0:
        raise exc.E_ARGUMENT.format('Bandwidth must be positive, got {value!r}', name='bandwidth', value=bandwidth)

    # Canonical order
    keys = sorted(values, key=lambda t: (values[t], t))
    x = np.array([values[k] for k in keys], dtype=float)

    modes = x.copy()
    for _ in range(max_iter):
        window = (np.abs(modes[:, None] - x[None, :]) <= bandwidth).astype(float)
        shifted = (window @ x) / window.sum(axis=1)
        shift = float(np.max(np.abs(shifted - modes)))
        modes = shifted
        if shift < tol:
            break

    groups = _merge_modes(x, modes, bandwidth)
    clusters = [
        Cluster(
            members=frozenset(keys[i] for i in group),
            center=float(np.mean(modes[group])),
            representative_score=float(np.mean(x[group])),
        )
        for group in groups
    ]
    return sorted(clusters, key=lambda c: c.sort_key)


def _merge_modes(x: np.ndarray, modes: np.ndarray, bandwidth: float) -> list[list[int]]:
    """ Group points with close modes. `x` is sorted ascending; in 1-D, modes keep that order

    A point joins the current group when its mode is closer than bandwidth/2 to the group center
    (the mean of the member modes), and every member value stays within one bandwidth of the new center.
    Groups are compared to their running center, never to their last member: no chains.
    """
    groups: list[list[int]] = []
    total = 0.0
    for i in range(len(x)):
        if groups:
            group = groups[-1]
            center = total / len(group)
            new_center = (total + modes[i]) / (len(group) + 1)
            if (abs(modes[i] - center) < bandwidth / 2
                    and new_center - x[group[0]] <= bandwidth
                    and x[i] - new_center <= bandwidth):
                group.append(i)
                total += modes[i]
                continue

        groups.append([i])
        total = modes[i]
    return groups


def select_operational(clusters: abc.Sequence[Cluster]) -> tuple[frozenset[TemplateId], bool]:
    """ Pick the cluster with the smallest score as operational

    Returns:
        (operational templates, degenerate). With a single cluster: (∅, True)

    Raises:
        exc.E_ARGUMENT: no clusters
    """
    if not clusters:
        raise exc.E_ARGUMENT('Cannot select from an empty list of clusters', name='clusters')
    if len(clusters) == 1:
        return frozenset(), True

    lowest = min(clusters, key=lambda c: c.sort_key)
    return lowest.members, False


def cluster_based_segment(scores: ScoreMap, bandwidth: Bandwidth = 'auto', *,
                          tol: float = TOLERANCE, max_iter: int = MAX_ITERATIONS) -> SegmentationResult:
    """ Cluster templates by score and select the operational ones

    Raises:
        exc.E_ARGUMENT: bad bandwidth, or no scores
    """
    b = resolve_bandwidth(bandwidth, scores.values())
    clusters = mean_shift_1d(scores, b, tol=tol, max_iter=max_iter)
    operational, degenerate = select_operational(clusters)

    if degenerate:
        logger.warning('Segmentation found a single cluster (bandwidth=%g): no template is removed', b)

    return SegmentationResult(
        clusters=tuple(clusters),
        operational=operational,
        degenerate=degenerate,
        bandwidth=b,
    )


def dependency_analysis(logs: LogSet, bandwidth: Bandwidth = 'auto', *,
                        tol: float = TOLERANCE, max_iter: int = MAX_ITERATIONS) -> DependencyResult:
    """ Score dependencies, segment templates, and remove the operational ones

    Raises:
        exc.E_DEPENDENCY_UNDEFINED: fewer than 2 templates
        exc.E_ARGUMENT: bad bandwidth
    """
    scores = compute_mscore(logs)
    segmentation = cluster_based_segment(scores, bandwidth, tol=tol, max_iter=max_iter)
    logger.info('Dependency analysis: %d clusters, operational: %s',
                len(segmentation.clusters), sorted(segmentation.operational) or 'none')

    return DependencyResult(
        operational=segmentation.operational,
        logs=remove_messages_of(segmentation.operational, logs),
        scores=scores,
        segmentation=segmentation,
    )
