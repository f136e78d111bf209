"""Static SVG charts: histogram overlays and expected-maximum curves."""

import io
import logging
from enum import Enum

import matplotlib


matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
from pydantic import BaseModel, Field  # noqa: E402


logger = logging.getLogger(__name__)

HASH_SALT = 'traffic-queues'


class ChartError(ValueError):
    """Raised when a chart has nothing to draw."""


class ChartKind(str, Enum):
    HISTOGRAM_OVERLAY = 'histogram-overlay'
    LINE_FAMILY = 'line-family'


class ChartSpec(BaseModel):
    """What to draw.

    For a histogram overlay, ``series`` holds an ``empirical`` series drawn as
    bars and a ``predicted`` series drawn as markers. For a line family every
    series is one curve.
    """

    kind: ChartKind
    series: dict[str, list[tuple[float, float]]] = Field(default_factory=dict)
    title: str = ''
    xlabel: str = ''
    ylabel: str = ''
    description: str = ''


def _histogram_overlay(ax, spec: ChartSpec) -> None:
    empirical = spec.series.get('empirical', [])
    predicted = spec.series.get('predicted', [])
    if empirical:
        xs, ys = zip(*empirical, strict=True)
        ax.bar(xs, ys, width=0.8, color='tab:blue', label='simulated')
    if predicted:
        xs, ys = zip(*predicted, strict=True)
        ax.plot(xs, ys, 'o', color='tab:red', label='predicted')


def _line_family(ax, spec: ChartSpec) -> None:
    for name, points in spec.series.items():
        if points:
            xs, ys = zip(*points, strict=True)
            ax.plot(xs, ys, label=name)


def render_chart(spec: ChartSpec) -> str:
    """Render ``spec`` to a self-contained SVG document.

    Output is byte-identical for identical specs: the SVG id salt is fixed
    and the date metadata is suppressed.

    Raises:
        ChartError: If every series is empty.
    """
    if not any(spec.series.values()):
        raise ChartError(f'Nothing to draw for {spec.kind.value} chart')

    with plt.rc_context({'svg.hashsalt': HASH_SALT, 'svg.fonttype': 'path'}):
        fig, ax = plt.subplots(figsize=(8, 5))
        try:
            if spec.kind is ChartKind.HISTOGRAM_OVERLAY:
                _histogram_overlay(ax, spec)
            else:
                _line_family(ax, spec)
            ax.set_title(spec.title)
            ax.set_xlabel(spec.xlabel)
            ax.set_ylabel(spec.ylabel)
            ax.legend()
            ax.grid(alpha=0.3)
            buffer = io.StringIO()
            fig.savefig(buffer, format='svg', metadata={'Date': None, 'Description': spec.description})
        finally:
            plt.close(fig)
    logger.debug(f'render_chart: {spec.kind.value} with {len(spec.series)} series')
    return buffer.getvalue()
