#!/usr/bin/env python3
# Copyright 2026 The Mockboard Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference for the presentation shuffle.

Prints the question order and per-question choice orders for a given seed,
using Python big integers masked to 64 bits. The C++ golden test pins the
values this script prints for seed 1, n = 10, four choices per question.
"""
import sys

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        # reject the top partial bucket so x % n is exactly uniform
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n


def shuffle(rng, items):
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def presentation(seed, choice_counts):
    rng = SplitMix64(seed)
    questions = shuffle(rng, range(len(choice_counts)))
    choices = [shuffle(rng, range(c)) for c in choice_counts]
    return questions, choices


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    c = int(sys.argv[3]) if len(sys.argv) > 3 else 4
    rng = SplitMix64(seed)
    print("first outputs:", [hex(rng.next()) for _ in range(3)])
    q, ch = presentation(seed, [c] * n)
    print("questions:", q)
    for i, p in enumerate(ch):
        print("choices[%d]:" % i, p)
