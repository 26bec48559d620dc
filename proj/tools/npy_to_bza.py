# Copyright 2026 The Blaz Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts a .npy array into the raw .bza layout read by `blaz compress`.

Usage: npy_to_bza.py input.npy output.bza [--kind f64|f32|f16]
"""

import argparse
import struct

import numpy as np

KINDS = {"f16": (1, "<f2"), "f32": (2, "<f4"), "f64": (3, "<f8")}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("input")
    parser.add_argument("output")
    parser.add_argument("--kind", choices=sorted(KINDS), default="f64")
    args = parser.parse_args()

    data = np.load(args.input)
    if data.ndim == 0 or 0 in data.shape:
        parser.error("array must have at least one axis and no zero extents")
    code, dtype = KINDS[args.kind]
    with open(args.output, "wb") as out:
        out.write(b"BZA1")
        out.write(struct.pack("<Q", data.ndim))
        out.write(struct.pack("<%dQ" % data.ndim, *data.shape))
        out.write(struct.pack("<B", code))
        out.write(np.ascontiguousarray(data, dtype=dtype).tobytes())


if __name__ == "__main__":
    main()
