"""
Dataset files: X goes to a matrix CSV (`rows,cols` header, 17 significant
digits per entry) and everything else to a JSON sidecar next to it with the
same stem: labels, class counts, bases, generation config and provenance.
"""

import os

import numpy as np

from .. import files
from ..errors import ConfigError, InvalidConfig, ParseError, PartitionMismatch
from ..rates import ClassPartition
from .dataset import GenerationConfig, LabeledDataset

KIND = "dataset"


def sidecar_path(path):
    stem, _ = os.path.splitext(str(path))
    return stem + ".json"


def save_dataset(ds, path, stamp=None):
    stamp = stamp or {}
    files.write_matrix(path, ds.X, stamp=stamp)
    files.write_json(
        sidecar_path(path),
        {
            "schema": files.SCHEMA,
            "kind": KIND,
            "d_x": ds.d_x,
            "n": ds.n,
            "k": ds.k,
            "labels": ds.partition.labels.tolist(),
            "class_counts": ds.partition.class_counts.tolist(),
            "subspace_dims": ds.subspace_dims,
            "bases": [B.tolist() for B in ds.bases],
            "config": ds.config.to_dict(),
            **stamp,
        },
    )


def load_dataset(path):
    X = files.read_matrix(path)
    meta_path = sidecar_path(path)
    if not os.path.exists(meta_path):
        raise ParseError(meta_path, "missing dataset sidecar")
    meta = files.read_json(meta_path)

    def field(key):
        return files.require(meta, key, meta_path)

    if field("schema") != files.SCHEMA or field("kind") != KIND:
        raise ParseError(
            meta_path, f"not a {files.SCHEMA} {KIND} sidecar", None, "schema"
        )
    if field("d_x") != X.shape[0]:
        raise ParseError(
            meta_path, f"d_x={meta['d_x']} but X has {X.shape[0]} rows", None, "d_x"
        )
    if field("n") != X.shape[1]:
        raise ParseError(
            meta_path, f"n={meta['n']} but X has {X.shape[1]} columns", None, "n"
        )
    try:
        partition = ClassPartition.from_labels(field("labels"), k=field("k"))
    except PartitionMismatch as e:
        raise ParseError(meta_path, str(e), None, "labels")
    if np.any(np.diff(partition.labels) < 0):
        raise ParseError(meta_path, "columns are not sorted by class", None, "labels")
    if partition.class_counts.tolist() != field("class_counts"):
        raise ParseError(meta_path, "class counts disagree with labels", None, "class_counts")

    bases = []
    for j, (B, d_j) in enumerate(zip(field("bases"), field("subspace_dims"))):
        B = np.array(B, dtype=np.float64)
        if B.shape != (X.shape[0], d_j):
            raise ParseError(meta_path, f"basis {j} has shape {B.shape}", None, f"bases[{j}]")
        bases.append(B)
    if len(bases) != partition.k:
        raise ParseError(meta_path, f"{len(bases)} bases for {partition.k} classes", None, "bases")

    try:
        config = GenerationConfig.from_dict(field("config"), prefix="config", path=meta_path)
    except (ConfigError, InvalidConfig) as e:
        raise ParseError(meta_path, str(e), None, "config")
    return LabeledDataset(X=X, partition=partition, bases=bases, config=config)
