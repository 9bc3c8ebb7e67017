"""Shared structure builders used across the test modules."""

from __future__ import annotations

from ppst.models import ChartModel, FrameModel, TensorField
from ppst.structures import ParacontactStructure


def frame_example() -> ParacontactStructure:
    """Frame-mode 3-d structure with [e1,e2] = 4 xi; A = 2 phi."""
    model = FrameModel(("e1", "e2", "xi"), (1, -1, 1), {(0, 1): (0, 0, 4)})
    phi = TensorField.from_rows(model, (1, 1), [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    xi = TensorField.vector(model, (0, 0, 1))
    eta = TensorField.covector(model, (0, 0, 1))
    frame = (TensorField.vector(model, (1, 0, 0)),
             TensorField.vector(model, (0, 1, 0)), xi)
    return ParacontactStructure(model, phi, xi, model.orthonormal_metric(), eta,
                                declared_frame=frame, name="example-frame")


def _chart_common(gxz: str, gzz: str):
    model = ChartModel(("x", "y", "z"), constraints=("z",))
    phi = TensorField.from_rows(model, (1, 1),
                                [[0, "4*y", 0], [0, 0, "1/z"], [0, "z", 0]])
    xi = TensorField.vector(model, (1, 0, 0))
    eta = TensorField.covector(model, (1, 0, "-4*y/z"))
    g = TensorField.from_rows(model, (0, 2),
                              [[1, 0, gxz], [0, -1, 0], [gxz, 0, gzz]])
    frame = (TensorField.vector(model, ("4*y", 0, "z")),
             TensorField.vector(model, (0, 1, 0)), xi)
    return model, phi, xi, eta, g, frame


def chart_printed() -> ParacontactStructure:
    """Chart-mode structure with the internally inconsistent metric."""
    model, phi, xi, eta, g, frame = _chart_common("-2*y/z", "(1+28*y^2)/z^2")
    return ParacontactStructure(model, phi, xi, g, eta, declared_frame=frame,
                                name="example-chart-printed")


def chart_corrected() -> ParacontactStructure:
    """Chart-mode structure with the metric fixed so the frame is orthonormal."""
    model, phi, xi, eta, g, frame = _chart_common("-4*y/z", "(1+16*y^2)/z^2")
    return ParacontactStructure(model, phi, xi, g, eta, declared_frame=frame,
                                name="example-chart-corrected")


def flat_cosymplectic() -> ParacontactStructure:
    """Flat chart-mode paracosymplectic structure on R^3."""
    model = ChartModel(("x", "y", "z"))
    phi = TensorField.from_rows(model, (1, 1), [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    xi = TensorField.vector(model, (0, 0, 1))
    eta = TensorField.covector(model, (0, 0, 1))
    g = TensorField.from_rows(model, (0, 2), [[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    return ParacontactStructure(model, phi, xi, g, eta, name="flat-paracosymplectic")


def negative_curvature_frame() -> ParacontactStructure:
    """Frame-mode structure of constant curvature K = -1 ([e1,e2] = 2e2 + 2xi)."""
    model = FrameModel(("e1", "e2", "xi"), (1, -1, 1), {(0, 1): (0, 2, 2)})
    phi = TensorField.from_rows(model, (1, 1), [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    xi = TensorField.vector(model, (0, 0, 1))
    eta = TensorField.covector(model, (0, 0, 1))
    return ParacontactStructure(model, phi, xi, model.orthonormal_metric(), eta,
                                name="constant-negative-curvature")
