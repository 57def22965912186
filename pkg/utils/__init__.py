"""
Initialize utils package
"""
from utils.helpers import (
    format_params,
    save_document,
    load_document,
    run_partitioned,
)
from utils.edge_cases import (
    ParameterScreen,
    get_parameter_screen,
    prime_power,
    odd_prime_powers,
    valid_divisors,
)

__all__ = [
    'format_params',
    'save_document',
    'load_document',
    'run_partitioned',
    'ParameterScreen',
    'get_parameter_screen',
    'prime_power',
    'odd_prime_powers',
    'valid_divisors',
]
