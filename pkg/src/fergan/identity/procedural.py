"""Parametric cartoon face renderer.

Gives the pipeline a fully deterministic identity source and toy corpora:
each latent vector maps to a face geometry (oval, eyes, brows, nose,
mouth), and each emotion applies a distinct local deformation to brows,
eyes, and mouth. Rendering is supersampled 4x and downsampled, so images
are smooth at 32 or 64 px and byte-identical across runs.
"""

import hashlib
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw

from ..emotions import EmotionLabel, coerce_label
from ..validation import check_latent

_SUPERSAMPLE = 4


@dataclass
class FaceGeometry:
    """Identity attributes in unit-square coordinates."""

    background: float
    skin: float
    line: float
    face_rx: float
    face_ry: float
    eye_y: float
    eye_dx: float
    eye_r: float
    pupil: float
    brow_len: float
    brow_gap: float
    brow_w: float
    mouth_y: float
    mouth_w: float
    nose_len: float
    intensity: float  # per-identity expression strength


def geometry_from_latent(latent) -> FaceGeometry:
    """Deterministically derive face attributes from a latent vector."""
    arr = np.asarray(latent, dtype=np.float32).reshape(-1)
    digest = hashlib.sha256(arr.astype("<f4").tobytes()).digest()
    rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest[:8], "little")))
    u = rng.uniform
    return FaceGeometry(
        background=u(0.06, 0.20),
        skin=u(0.55, 0.85),
        line=u(0.08, 0.22),
        face_rx=u(0.30, 0.40),
        face_ry=u(0.36, 0.45),
        eye_y=u(0.40, 0.46),
        eye_dx=u(0.15, 0.21),
        eye_r=u(0.035, 0.055),
        pupil=u(0.02, 0.18),
        brow_len=u(0.09, 0.13),
        brow_gap=u(0.045, 0.075),
        brow_w=u(0.012, 0.024),
        mouth_y=u(0.66, 0.72),
        mouth_w=u(0.13, 0.20),
        nose_len=u(0.07, 0.12),
        intensity=u(0.75, 1.0),
    )


def _bezier(p0, p1, p2, n: int = 25):
    ts = np.linspace(0.0, 1.0, n)
    pts = [((1 - t) ** 2 * p0[0] + 2 * (1 - t) * t * p1[0] + t ** 2 * p2[0],
            (1 - t) ** 2 * p0[1] + 2 * (1 - t) * t * p1[1] + t ** 2 * p2[1]) for t in ts]
    return pts


def _shade(value: float) -> int:
    return int(np.clip(round(value * 255.0), 0, 255))


# Per-emotion eye opening scale (width, height) at full intensity.
_EYE_SCALE = {
    None: (1.00, 1.00),
    EmotionLabel.ANGER: (1.00, 0.60),
    EmotionLabel.DISGUST: (1.00, 0.48),
    EmotionLabel.FEAR: (1.05, 1.30),
    EmotionLabel.HAPPINESS: (1.00, 0.90),
    EmotionLabel.SADNESS: (1.00, 0.85),
    EmotionLabel.SURPRISED: (1.10, 1.50),
}

# Brow (lift above neutral, inner-end tilt); tilt > 0 drops the inner end.
_BROW_POSE = {
    None: (0.000, 0.000),
    EmotionLabel.ANGER: (-0.010, 0.055),
    EmotionLabel.DISGUST: (-0.006, 0.018),
    EmotionLabel.FEAR: (0.035, 0.000),
    EmotionLabel.HAPPINESS: (0.008, -0.006),
    EmotionLabel.SADNESS: (0.012, -0.048),
    EmotionLabel.SURPRISED: (0.055, 0.000),
}


def _draw_brows(draw, geom: FaceGeometry, emotion, t: float, S: float):
    lift, tilt = _BROW_POSE[emotion]
    lift *= t
    tilt *= t
    base_y = geom.eye_y - geom.brow_gap - lift
    width = max(1, int(round(geom.brow_w * S)))
    arched = emotion is EmotionLabel.SURPRISED
    for side in (-1, 1):
        cx = 0.5 + side * geom.eye_dx
        inner = (cx - side * geom.brow_len / 2, base_y + tilt / 2)
        outer = (cx + side * geom.brow_len / 2, base_y - tilt / 2)
        if arched:
            mid = ((inner[0] + outer[0]) / 2, base_y - 0.030 * t)
            pts = [(x * S, y * S) for x, y in _bezier(inner, mid, outer)]
            draw.line(pts, fill=_shade(geom.line), width=width, joint="curve")
        else:
            draw.line([(inner[0] * S, inner[1] * S), (outer[0] * S, outer[1] * S)],
                      fill=_shade(geom.line), width=width)


def _draw_eyes(draw, geom: FaceGeometry, emotion, t: float, S: float):
    sw, sh = _EYE_SCALE[emotion]
    # interpolate toward neutral for softer per-identity intensities
    sw = 1.0 + (sw - 1.0) * t
    sh = 1.0 + (sh - 1.0) * t
    rx = geom.eye_r * sw
    ry = geom.eye_r * sh
    for side in (-1, 1):
        cx = 0.5 + side * geom.eye_dx
        box = [(cx - rx) * S, (geom.eye_y - ry) * S, (cx + rx) * S, (geom.eye_y + ry) * S]
        draw.ellipse(box, fill=_shade(0.93), outline=_shade(geom.line),
                     width=max(1, int(round(0.006 * S))))
        pr = 0.45 * min(rx, ry)
        pbox = [(cx - pr) * S, (geom.eye_y - pr) * S, (cx + pr) * S, (geom.eye_y + pr) * S]
        draw.ellipse(pbox, fill=_shade(geom.pupil))


def _draw_mouth(draw, geom: FaceGeometry, emotion, t: float, S: float):
    line = _shade(geom.line)
    dark = _shade(0.08)
    width = max(1, int(round(0.016 * S)))
    half = geom.mouth_w / 2
    y = geom.mouth_y

    def curve(bulge: float, half_w: float, y0: float, thick=width):
        pts = _bezier((0.5 - half_w, y0), (0.5, y0 + bulge), (0.5 + half_w, y0))
        draw.line([(x * S, yy * S) for x, yy in pts], fill=line, width=thick, joint="curve")

    if emotion is None:
        curve(0.0, half, y)
    elif emotion is EmotionLabel.HAPPINESS:
        curve(0.085 * t, half * 1.15, y - 0.02 * t)
    elif emotion is EmotionLabel.SADNESS:
        curve(-0.075 * t, half, y + 0.015 * t)
    elif emotion is EmotionLabel.ANGER:
        curve(-0.020 * t, half * 0.85, y, thick=int(width * 1.6))
    elif emotion is EmotionLabel.DISGUST:
        y_up = y - 0.030 * t
        curve(-0.035 * t, half * 0.9, y_up)
        # nose wrinkle above the raised lip
        wy = y_up - 0.045
        draw.line([( (0.5 - half * 0.55) * S, wy * S), ((0.5 + half * 0.55) * S, wy * S)],
                  fill=line, width=max(1, width // 2))
    elif emotion is EmotionLabel.FEAR:
        # wide, shallow open mouth
        rx = half * 0.95
        ry = 0.022 + 0.022 * t
        box = [(0.5 - rx) * S, (y - ry) * S, (0.5 + rx) * S, (y + ry) * S]
        draw.ellipse(box, fill=dark, outline=line, width=width)
    elif emotion is EmotionLabel.SURPRISED:
        # tall round open mouth
        r = 0.040 + 0.030 * t
        box = [(0.5 - r * 0.8) * S, (y - r) * S, (0.5 + r * 0.8) * S, (y + r) * S]
        draw.ellipse(box, fill=dark, outline=line, width=width)
    else:  # pragma: no cover
        raise ValueError(f"unhandled emotion {emotion!r}")


def render_face(geom: FaceGeometry, emotion=None, image_size: int = 64,
                channels: int = 1) -> np.ndarray:
    """Render one face; emotion=None draws the neutral identity pose."""
    if emotion is not None:
        emotion = coerce_label(emotion)
    S = image_size * _SUPERSAMPLE
    canvas = Image.new("L", (S, S), _shade(geom.background))
    draw = ImageDraw.Draw(canvas)
    t = geom.intensity

    face_box = [(0.5 - geom.face_rx) * S, (0.52 - geom.face_ry) * S,
                (0.5 + geom.face_rx) * S, (0.52 + geom.face_ry) * S]
    draw.ellipse(face_box, fill=_shade(geom.skin), outline=_shade(geom.line),
                 width=max(1, int(round(0.008 * S))))

    nose_top = geom.eye_y + 0.06
    draw.line([(0.5 * S, nose_top * S), (0.5 * S, (nose_top + geom.nose_len) * S)],
              fill=_shade(geom.line), width=max(1, int(round(0.008 * S))))

    _draw_brows(draw, geom, emotion, t, S)
    _draw_eyes(draw, geom, emotion, t, S)
    _draw_mouth(draw, geom, emotion, t, S)

    small = canvas.resize((image_size, image_size), Image.LANCZOS)
    arr = np.asarray(small, dtype=np.float32)[:, :, None] / 255.0
    if channels == 3:
        arr = np.repeat(arr, 3, axis=2)
    return np.clip(arr, 0.0, 1.0)


def render_from_latent(latent, emotion=None, image_size: int = 64,
                       channels: int = 1) -> np.ndarray:
    return render_face(geometry_from_latent(latent), emotion, image_size, channels)


def toy_latents(n: int, latent_dim: int = 16, seed: int = 0) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.standard_normal((n, latent_dim)).astype(np.float32)


def make_toy_corpus(n_identities: int, image_size: int = 64, seed: int = 0,
                    channels: int = 1, source_db: str = "toy",
                    id_prefix: str = "toy", provenance: str = "real"):
    """Render a balanced labeled corpus: every identity in all six emotions."""
    from ..data.records import FaceDataset, LabeledFace

    latents = toy_latents(n_identities, seed=seed)
    records = []
    for i in range(n_identities):
        geom = geometry_from_latent(latents[i])
        identity = f"{id_prefix}-{seed}-{i:04d}"
        for emotion in EmotionLabel:
            records.append(
                LabeledFace(
                    image=render_face(geom, emotion, image_size, channels),
                    emotion=emotion,
                    identity_id=identity,
                    provenance=provenance,
                    source_db=source_db,
                )
            )
    return FaceDataset(records, tag=source_db)


def check_latent_for(latent, latent_dim: int) -> np.ndarray:
    return check_latent(latent, latent_dim)
