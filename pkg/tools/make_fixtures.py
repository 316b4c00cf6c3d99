"""Regenerate the JSON files under fixtures/."""

from pathlib import Path

import numpy as np

from krein_weyl.boundary import from_colligation
from krein_weyl.colligation import random_colligation
from krein_weyl.extensions import ExtensionParameter
from krein_weyl.fixtures import (constant_colligation, example_pair, flip_kappa1_colligation,
                                 scalar_lambda_pair)
from krein_weyl.io import dumps, encode_colligation, encode_complex, encode_matrix, encode_pair, encode_phi
from krein_weyl.realize import RationalFunctionData, realize

OUT = Path(__file__).resolve().parents[1] / "fixtures"


def write(name, obj):
    (OUT / name).write_text(dumps(obj) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write("example35.json", encode_pair(example_pair()))
    write("lambda.json", encode_pair(scalar_lambda_pair()))
    write("flip_kappa1.json", encode_colligation(flip_kappa1_colligation()))
    inv = realize(RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5), 0.5)
    write("inverse_lambda.json", encode_pair(inv.pair))
    write("random_k1_l1.json", encode_pair(from_colligation(random_colligation(11, 3, 1, 1))))
    write("constant_flip.json", encode_colligation(constant_colligation([[0, 1], [1, 0]])))
    write("phi_half.json", encode_phi(ExtensionParameter.from_graph(0.5)))
    write("phi_example.json", encode_phi(ExtensionParameter(np.eye(3), 0.5 * np.eye(3))))
    write("realize_inverse_lambda.json", {
        "taylor": [encode_matrix(2 * (-2.0) ** k) for k in range(9)],
        "center": encode_complex(0.5), "alpha": encode_complex(0.5)})
    write("realize_lambda.json", {
        "taylor": [encode_matrix(float(k == 1)) for k in range(7)],
        "center": encode_complex(0), "alpha": encode_complex(0)})


if __name__ == "__main__":
    main()
