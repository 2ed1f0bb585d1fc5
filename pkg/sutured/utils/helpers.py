import logging

from sutured.errors import MalformedInputError
from sutured.services.exterior_algebra import CoefficientRing


def parse_ring(value, default="f2"):
    return CoefficientRing.parse(value if value is not None else default)


def require_keys(data, keys):
    if not isinstance(data, dict):
        raise MalformedInputError("expected a JSON object")
    for key in keys:
        if key not in data:
            raise MalformedInputError(f"Missing required field: {key}")
    return True


def parse_int(value, name):
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise MalformedInputError(f"{name} must be an integer, got {value!r}") from exc


def parse_positive_int(value, name, minimum=1):
    number = parse_int(value, name)
    if number < minimum:
        raise MalformedInputError(f"{name} must be >= {minimum}, got {number}")
    return number


def log_error(error_message):
    logging.error(error_message)
