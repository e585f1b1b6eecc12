"""
    This file is part of Sharp Front Toolkit.

    Copyright (C) 2024-2026 The Sharp Front Toolkit developers

    Sharp Front Toolkit is free software; you can redistribute it and/or modify it under the terms of the GNU General
    Public License as published by the Free Software Foundation; either version 3 of the License, or (at your option)
    any later version.

    Sharp Front Toolkit is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the
    implied warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public License for
    more details.

    You should have received a copy of the GNU General Public License along with Sharp Front Toolkit. If not, see
    <http://www.gnu.org/licenses/>.
"""

import logging
import os
import sys

from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

# Qt needs a platform plugin even when it only paints into files
os.environ.setdefault("QT_QPA_PLATFORM", "offscreen")

# pylint: disable=wrong-import-position
from PyQt5.QtCore import QPointF, QRectF, QSize, Qt
from PyQt5.QtGui import QColor, QFont, QGuiApplication, QPainter, QPainterPath, QPen
from PyQt5.QtSvg import QSvgGenerator

# Define the logger
LOG = logging.getLogger(os.path.basename(__file__).split('.')[0])

# Application object kept alive while painting
APPLICATION = None


def _application() -> QGuiApplication:
    """
    Get the Qt application, created on first use.
    :return: Application object.
    """
    global APPLICATION  # pylint: disable=global-statement
    if APPLICATION is None:
        APPLICATION = QGuiApplication.instance() or QGuiApplication(sys.argv[:1])
    return APPLICATION


class LinePlot:
    """
    Class representing a static line plot written as SVG.
    """
    # Canvas size (unit: pixels)
    WIDTH = 720
    HEIGHT = 480

    # Margin around the plot area (unit: pixels)
    MARGIN = 64

    # Axis and text color
    AXIS_COLOR = QColor(60, 60, 60)

    # Colors of consecutive series
    SERIES_COLORS = [QColor(117, 16, 0), QColor(0, 90, 160), QColor(40, 130, 40), QColor(200, 120, 0),
                     QColor(110, 60, 150), QColor(0, 140, 140)]

    # Number of ticks per axis
    TICKS = 5

    def __init__(self, title: str, x_label: str, y_label: str) -> None:
        """
        Class constructor.
        :param title: Plot title.
        :param x_label: Label of the horizontal axis.
        :param y_label: Label of the vertical axis.
        """
        self.__title = title
        self.__x_label = x_label
        self.__y_label = y_label
        self.__series: List[Tuple[np.ndarray, np.ndarray, str, bool]] = []

    def add_series(self, x: Sequence[float], y: Sequence[float], label: str, dashed: bool = False) -> None:
        """
        Add a series. Non-finite points are dropped.
        :param x: Abscissae.
        :param y: Ordinates.
        :param label: Legend entry.
        :param dashed: Draw the series dashed.
        """
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        finite = np.isfinite(x) & np.isfinite(y)
        self.__series.append((x[finite], y[finite], label, dashed))

    def __limits(self) -> Tuple[float, float, float, float]:
        """
        Get the data range of all series, widened where it is degenerate.
        :return: Tuple x_min, x_max, y_min, y_max.
        """
        xs = np.concatenate([series[0] for series in self.__series] or [np.zeros(1)])
        ys = np.concatenate([series[1] for series in self.__series] or [np.zeros(1)])
        if not len(xs):
            xs, ys = np.zeros(1), np.zeros(1)
        x_min, x_max, y_min, y_max = float(np.min(xs)), float(np.max(xs)), float(np.min(ys)), float(np.max(ys))
        if x_max - x_min <= 0.0:
            x_min, x_max = x_min - 0.5, x_max + 0.5
        if y_max - y_min <= 0.0:
            y_min, y_max = y_min - 0.5, y_max + 0.5
        return x_min, x_max, y_min, y_max

    def save(self, path: Path) -> None:
        """
        Paint the plot into an SVG file.
        :param path: Output file.
        """
        _application()

        generator = QSvgGenerator()
        generator.setFileName(str(path))
        generator.setSize(QSize(self.WIDTH, self.HEIGHT))
        generator.setViewBox(QRectF(0, 0, self.WIDTH, self.HEIGHT))
        generator.setTitle(self.__title)

        painter = QPainter(generator)
        painter.setRenderHint(QPainter.Antialiasing)
        font = QFont()
        font.setPointSize(9)
        painter.setFont(font)
        self.__paint_axes(painter)
        self.__paint_series(painter)
        painter.end()
        LOG.debug("Wrote %s (%d series).", path, len(self.__series))

    def __paint_axes(self, painter: QPainter) -> None:
        """
        Paint the frame, the ticks, the labels and the title.
        :param painter: Active painter.
        """
        area = QRectF(self.MARGIN, self.MARGIN / 2, self.WIDTH - 1.5 * self.MARGIN, self.HEIGHT - 1.5 * self.MARGIN)
        x_min, x_max, y_min, y_max = self.__limits()

        painter.setPen(QPen(self.AXIS_COLOR, 1, Qt.SolidLine, Qt.RoundCap, Qt.RoundJoin))
        painter.drawRect(area)
        for index in range(self.TICKS + 1):
            fraction = index / self.TICKS
            x = area.left() + fraction * area.width()
            y = area.bottom() - fraction * area.height()
            painter.drawLine(QPointF(x, area.bottom()), QPointF(x, area.bottom() + 4))
            painter.drawLine(QPointF(area.left() - 4, y), QPointF(area.left(), y))
            painter.drawText(QRectF(x - 40, area.bottom() + 6, 80, 16), Qt.AlignHCenter | Qt.AlignTop,
                             f"{x_min + fraction * (x_max - x_min):.4g}")
            painter.drawText(QRectF(0, y - 8, self.MARGIN - 8, 16), Qt.AlignRight | Qt.AlignVCenter,
                             f"{y_min + fraction * (y_max - y_min):.4g}")

        painter.drawText(QRectF(area.left(), self.HEIGHT - 24, area.width(), 20), Qt.AlignHCenter, self.__x_label)
        painter.drawText(QRectF(area.left(), 4, area.width(), 20), Qt.AlignHCenter, self.__title)
        painter.save()
        painter.translate(14, area.center().y())
        painter.rotate(-90)
        painter.drawText(QRectF(-area.height() / 2, -10, area.height(), 20), Qt.AlignHCenter, self.__y_label)
        painter.restore()

    def __paint_series(self, painter: QPainter) -> None:
        """
        Paint every series as a polyline with its legend entry.
        :param painter: Active painter.
        """
        area = QRectF(self.MARGIN, self.MARGIN / 2, self.WIDTH - 1.5 * self.MARGIN, self.HEIGHT - 1.5 * self.MARGIN)
        x_min, x_max, y_min, y_max = self.__limits()

        def point(x: float, y: float) -> QPointF:
            return QPointF(area.left() + (x - x_min) / (x_max - x_min) * area.width(),
                           area.bottom() - (y - y_min) / (y_max - y_min) * area.height())

        for index, (xs, ys, label, dashed) in enumerate(self.__series):
            color = self.SERIES_COLORS[index % len(self.SERIES_COLORS)]
            painter.setPen(QPen(color, 1.5, Qt.DashLine if dashed else Qt.SolidLine, Qt.RoundCap, Qt.RoundJoin))
            if len(xs):
                path = QPainterPath(point(xs[0], ys[0]))
                for x, y in zip(xs[1:], ys[1:]):
                    path.lineTo(point(x, y))
                painter.drawPath(path)
            legend_y = area.top() + 8 + 16 * index
            painter.drawLine(QPointF(area.right() - 150, legend_y), QPointF(area.right() - 126, legend_y))
            painter.setPen(QPen(self.AXIS_COLOR))
            painter.drawText(QRectF(area.right() - 120, legend_y - 8, 116, 16), Qt.AlignLeft | Qt.AlignVCenter, label)


def plot_lines(path: Path, title: str, x_label: str, y_label: str,
               series: Sequence[Tuple[Sequence[float], Sequence[float], str]],
               dashed: Optional[Sequence[bool]] = None) -> None:
    """
    Write a line plot of several series.
    :param path: Output file.
    :param title: Plot title.
    :param x_label: Label of the horizontal axis.
    :param y_label: Label of the vertical axis.
    :param series: Tuples of abscissae, ordinates and legend entry.
    :param dashed: Dash flag per series.
    """
    plot = LinePlot(title, x_label, y_label)
    for index, (xs, ys, label) in enumerate(series):
        plot.add_series(xs, ys, label, bool(dashed[index]) if dashed is not None else False)
    plot.save(path)


if __name__ == "__main__":
    LOG.critical("This module is not supposed to be executed.")
    sys.exit(1)
