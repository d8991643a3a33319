from stein_embed.mc.engine import Estimate, chunk_sizes, discrepancy, estimate, replica_generator
from stein_embed.mc.pairs import ExchangeablePair, abc_from_pairs
from stein_embed.mc.testfunctions import (
    CosineTestFunction,
    LinearTestFunction,
    SigmoidProductTestFunction,
    TestFunction,
    get_test_function,
    test_function_names,
)

__all__ = [
    'CosineTestFunction',
    'Estimate',
    'ExchangeablePair',
    'LinearTestFunction',
    'SigmoidProductTestFunction',
    'TestFunction',
    'abc_from_pairs',
    'chunk_sizes',
    'discrepancy',
    'estimate',
    'get_test_function',
    'replica_generator',
    'test_function_names',
]
