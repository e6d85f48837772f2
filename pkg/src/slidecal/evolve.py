"""Discrete minimization of the weighted area under the sliding constraint.

Vertices carry one of three roles during descent:

  * pinned vertices never move (they realize the compact-support
    requirement on deformations);
  * sliding vertices started on the plane {z = 0} and may move only inside
    it (points on the sliding plane must stay there);
  * free vertices move anywhere in the closed half-space; a step taking
    one below the plane clamps it to z = 0.

A free vertex that stays clamped at z = 0 for five consecutive accepted
steps is converted, one way, into a sliding vertex, and every triangle
whose three corners are sliding becomes part of the weighted contact
region.  That is how the flat contact patch ("fat triangle") grows out of
the half-T below the threshold weight.

Descent is plain projected gradient with a backtracking line search, so
the energy trace is monotone non-increasing; gradients are assembled with
per-vertex gathers (no accumulation races), making runs with a fixed seed
bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geom

CONTACT_ITERS = 5      # consecutive clamped steps before conversion
SLIDE_Z_TOL = 1e-12    # initial |z| below this means "on the plane"


@dataclass
class EvolveConfig:
    """Settings for a descent run.

    ``pin`` is a boolean vertex mask or a predicate mapping an (n, 3)
    vertex array to one; None pins the mesh rim (boundary vertices having
    at least one boundary edge off the sliding plane).  The step is capped
    each iteration so no vertex moves more than a quarter of the current
    minimum edge length.
    """

    alpha: float
    step: float = 0.05
    max_iters: int = 20000
    tol: float = 1e-10
    pin: Optional[object] = None
    contact_iters: int = CONTACT_ITERS


@dataclass
class EvolveTrace:
    energies: list
    mesh: geom.Mesh
    gamma_contact_area: float
    converged: bool
    iterations: int


def rim_pin_mask(mesh: geom.Mesh) -> np.ndarray:
    """Vertices on the mesh rim that must stay put: endpoints of boundary
    edges not contained in the sliding plane.  Boundary edges inside the
    plane stay slidable."""
    edge_count = {}
    for a, b, c in mesh.triangles:
        for i, j in ((a, b), (b, c), (c, a)):
            key = (min(i, j), max(i, j))
            edge_count[key] = edge_count.get(key, 0) + 1
    pin = np.zeros(mesh.n_vertices, dtype=bool)
    z = mesh.vertices[:, 2]
    for (i, j), count in edge_count.items():
        if count == 1 and not (abs(z[i]) <= SLIDE_Z_TOL and abs(z[j]) <= SLIDE_Z_TOL):
            pin[i] = True
            pin[j] = True
    return pin


def _resolve_pin(mesh: geom.Mesh, pin) -> np.ndarray:
    if pin is None:
        return rim_pin_mask(mesh)
    if callable(pin):
        mask = np.asarray(pin(mesh.vertices), dtype=bool)
    else:
        mask = np.asarray(pin, dtype=bool)
    if mask.shape != (mesh.n_vertices,):
        raise ValueError("pin mask must have one entry per vertex")
    return mask


def seed_contact(mesh: geom.Mesh, height: float,
                 pin: Optional[object] = None) -> geom.Mesh:
    """Press the unpinned vertices lower than ``height`` onto the sliding
    plane, dropping triangles this degenerates and flagging those that now
    lie in the plane.

    Fixed-topology gradient flow cannot open a contact patch at a conical
    point on the plane: configurations without contact are calibration-
    bounded below by the cone's energy, so the flow, which never climbs,
    returns to the cone no matter how it is jittered.  (Surface Evolver
    escapes by popping the cone vertex, a topology change.)  Seeding a
    one-ring touchdown is the fixed-topology substitute; whether descent
    then grows or re-absorbs the patch is decided by the weight alpha.
    """
    pinned = _resolve_pin(mesh, pin)
    v = mesh.vertices.copy()
    press = (~pinned) & (v[:, 2] > SLIDE_Z_TOL) & (v[:, 2] <= height)
    v[press, 2] = 0.0
    areas = geom.triangle_areas(v, mesh.triangles)
    keep = areas > 1e-12
    tris = mesh.triangles[keep]
    gamma = mesh.gamma[keep].copy()
    gamma |= (np.abs(v[:, 2]) <= SLIDE_Z_TOL)[tris].all(axis=1)
    return geom.Mesh(v, tris, gamma)


def jitter(mesh: geom.Mesh, scale: float, seed: int,
           pin: Optional[object] = None) -> geom.Mesh:
    """Normal perturbation of the non-pinned vertices (fixed seed).

    Sliding vertices are perturbed inside the plane only; free vertices
    are reflected back above it if the noise takes them below."""
    rng = np.random.default_rng(seed)
    pinned = _resolve_pin(mesh, pin)
    v = mesh.vertices.copy()
    noise = rng.normal(0.0, scale, size=v.shape)
    sliding = np.abs(v[:, 2]) <= SLIDE_Z_TOL
    noise[sliding, 2] = 0.0
    noise[pinned] = 0.0
    v += noise
    v[:, 2] = np.abs(v[:, 2])
    v[sliding, 2] = 0.0
    return geom.Mesh(v, mesh.triangles, mesh.gamma)


def _weighted_area(pos, tris, weights) -> float:
    a, b, c = pos[tris[:, 0]], pos[tris[:, 1]], pos[tris[:, 2]]
    n = np.cross(b - a, c - a)
    areas = 0.5 * np.linalg.norm(n, axis=1)
    return float(np.dot(weights, areas))


def _area_gradient(pos, tris, weights, n_vertices) -> np.ndarray:
    """Exact gradient of the weighted area with respect to vertex
    positions; degenerate triangles contribute nothing."""
    a, b, c = pos[tris[:, 0]], pos[tris[:, 1]], pos[tris[:, 2]]
    n = np.cross(b - a, c - a)
    norms = np.linalg.norm(n, axis=1)
    safe = np.where(norms > 1e-30, norms, 1.0)
    n_hat = n / safe[:, None]
    n_hat[norms <= 1e-30] = 0.0
    w = weights[:, None]
    ga = 0.5 * np.cross(b - c, n_hat) * w
    gb = 0.5 * np.cross(c - a, n_hat) * w
    gc = 0.5 * np.cross(a - b, n_hat) * w
    grad = np.zeros((n_vertices, 3))
    for idx, g in ((tris[:, 0], ga), (tris[:, 1], gb), (tris[:, 2], gc)):
        for d in range(3):
            grad[:, d] += np.bincount(idx, weights=g[:, d], minlength=n_vertices)
    return grad


def _min_edge(pos, tris) -> float:
    a, b, c = pos[tris[:, 0]], pos[tris[:, 1]], pos[tris[:, 2]]
    e = np.concatenate([np.linalg.norm(b - a, axis=1),
                        np.linalg.norm(c - b, axis=1),
                        np.linalg.norm(a - c, axis=1)])
    return float(e.min())


def descend(mesh: geom.Mesh, cfg: EvolveConfig) -> EvolveTrace:
    """Projected gradient descent on the weighted area.

    Returns the energy trace (monotone non-increasing), the final mesh,
    and the area of the weighted contact region it grew.  Stops when an
    accepted step decreases the energy by less than ``tol``, when no
    backtracked step decreases it at all, or at ``max_iters`` (flagged
    not converged)."""
    if not 0.0 <= cfg.alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {cfg.alpha}")
    pinned = _resolve_pin(mesh, cfg.pin)
    if not pinned.any():
        raise ValueError("pin set is empty; deformations must be compact")

    pos = mesh.vertices.copy()
    tris = mesh.triangles.copy()
    gamma_tri = mesh.gamma.copy()
    sliding = np.abs(pos[:, 2]) <= SLIDE_Z_TOL
    sliding |= np.isin(np.arange(len(pos)), tris[gamma_tri].ravel())
    pos[sliding, 2] = 0.0
    # triangles lying in the plane carry the weight from the start (the
    # contact rule applied at iteration zero)
    gamma_tri |= sliding[tris].all(axis=1)
    movable = ~pinned

    weights = np.where(gamma_tri, cfg.alpha, 1.0)
    energies = [_weighted_area(pos, tris, weights)]
    contact_count = np.zeros(len(pos), dtype=int)
    converged = False

    for iteration in range(cfg.max_iters):
        grad = _area_gradient(pos, tris, weights, len(pos))
        grad[pinned] = 0.0
        grad[sliding, 2] = 0.0
        gmax = float(np.linalg.norm(grad, axis=1).max())
        if gmax == 0.0:
            converged = True
            break
        step = min(cfg.step, _min_edge(pos, tris) / (4.0 * gmax))
        j_old = energies[-1]
        accepted = False
        for _ in range(40):
            cand = pos - step * grad
            cand[sliding, 2] = 0.0
            np.maximum(cand[:, 2], 0.0, out=cand[:, 2])
            j_new = _weighted_area(cand, tris, weights)
            if j_new < j_old:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True
            break
        pos = cand
        # one-way contact: clamped free vertices become sliding after a few
        # consecutive floor hits, and fully-sliding triangles join the
        # weighted region
        at_floor = movable & ~sliding & (pos[:, 2] <= 0.0)
        contact_count[at_floor] += 1
        contact_count[~at_floor] = 0
        new_sliding = contact_count >= cfg.contact_iters
        if new_sliding.any():
            sliding |= new_sliding
            contact_count[new_sliding] = 0
            newly_flat = ~gamma_tri & sliding[tris].all(axis=1)
            if newly_flat.any():
                gamma_tri |= newly_flat
                weights = np.where(gamma_tri, cfg.alpha, 1.0)
                j_new = _weighted_area(pos, tris, weights)
        energies.append(j_new)
        if j_old - j_new < cfg.tol:
            converged = True
            break

    areas = geom.triangle_areas(pos, tris)
    keep = areas > geom.DEGENERATE_AREA
    final = geom.Mesh(pos, tris[keep], gamma_tri[keep])
    contact = math.fsum(areas[keep & gamma_tri])
    return EvolveTrace(energies=energies, mesh=final,
                       gamma_contact_area=contact,
                       converged=converged, iterations=len(energies) - 1)


def gradient_check(mesh: geom.Mesh, alpha: float, h: float = 1e-5,
                   n_vertices: int = 50, seed: int = 0,
                   pin: Optional[object] = None) -> float:
    """Central finite differences of the weighted area against the
    analytic gradient on a random sample of movable vertices; returns the
    maximum relative defect.

    Pinned vertices must have exactly zero gradient and sliding vertices
    exactly zero vertical component; both are asserted here."""
    if not 1e-7 <= h <= 1e-4:
        raise ValueError(f"h must lie in [1e-7, 1e-4], got {h}")
    pinned = _resolve_pin(mesh, pin)
    pos = mesh.vertices.copy()
    tris = mesh.triangles
    weights = np.where(mesh.gamma, alpha, 1.0)
    sliding = np.abs(pos[:, 2]) <= SLIDE_Z_TOL

    grad = _area_gradient(pos, tris, weights, len(pos))
    grad[pinned] = 0.0
    grad[sliding, 2] = 0.0
    if np.any(grad[pinned] != 0.0):
        raise AssertionError("pinned vertex with nonzero gradient")
    if np.any(grad[sliding, 2] != 0.0):
        raise AssertionError("sliding vertex with vertical gradient")

    movable = np.nonzero(~pinned)[0]
    rng = np.random.default_rng(seed)
    sample = rng.choice(movable, size=min(n_vertices, len(movable)), replace=False)
    worst = 0.0
    for v in sample:
        dims = (0, 1) if sliding[v] else (0, 1, 2)
        for d in dims:
            old = pos[v, d]
            pos[v, d] = old + h
            jp = _weighted_area(pos, tris, weights)
            pos[v, d] = old - h
            jm = _weighted_area(pos, tris, weights)
            pos[v, d] = old
            fd = (jp - jm) / (2.0 * h)
            defect = abs(fd - grad[v, d]) / max(1.0, abs(grad[v, d]))
            worst = max(worst, defect)
    return worst
