"""
Encoder/decoder files: `encoder.csv` and `decoder.csv` matrices plus a
`pair.json` sidecar naming the game kind, dimensions and precision.
"""

import os

from .. import files
from ..errors import InvalidInput, ParseError
from ..rates import Precision
from .core import GameSpec, LinearDecoder, LinearEncoder

ENCODER_CSV = "encoder.csv"
DECODER_CSV = "decoder.csv"
PAIR_JSON = "pair.json"

KIND = "pair"


def save_pair(spec, enc, dec, output_dir, stamp=None, extra=None):
    stamp = stamp or {}
    output_dir = files.prepare_output_dir(output_dir)
    files.write_matrix(os.path.join(output_dir, ENCODER_CSV), enc.F, stamp=stamp)
    files.write_matrix(os.path.join(output_dir, DECODER_CSV), dec.G, stamp=stamp)
    files.write_json(
        os.path.join(output_dir, PAIR_JSON),
        {
            "schema": files.SCHEMA,
            "kind": KIND,
            "game": spec.kind.value,
            "d_x": spec.d_x,
            "d_z": spec.d_z,
            "eps_sq": spec.precision.eps_sq,
            **(extra or {}),
            **stamp,
        },
    )


def load_pair(input_dir):
    meta_path = os.path.join(input_dir, PAIR_JSON)
    if not os.path.exists(meta_path):
        raise ParseError(meta_path, "missing encoder/decoder sidecar")
    meta = files.read_json(meta_path)

    def field(key):
        return files.require(meta, key, meta_path)

    if field("schema") != files.SCHEMA or field("kind") != KIND:
        raise ParseError(meta_path, f"not a {files.SCHEMA} {KIND} sidecar", None, "schema")
    try:
        spec = GameSpec(
            kind=field("game"),
            d_x=field("d_x"),
            d_z=field("d_z"),
            precision=Precision(field("eps_sq")),
        )
    except (InvalidInput, ValueError) as e:
        raise ParseError(meta_path, str(e), None, "game")
    enc_path = os.path.join(input_dir, ENCODER_CSV)
    dec_path = os.path.join(input_dir, DECODER_CSV)
    F = files.read_matrix(enc_path)
    G = files.read_matrix(dec_path)
    if F.shape != (spec.d_z, spec.d_x):
        raise ParseError(enc_path, f"encoder shape {F.shape} disagrees with sidecar")
    if G.shape != (spec.d_x, spec.d_z):
        raise ParseError(dec_path, f"decoder shape {G.shape} disagrees with sidecar")
    return spec, LinearEncoder(F), LinearDecoder(G)
