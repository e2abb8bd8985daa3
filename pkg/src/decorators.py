import argparse
import functools
import logging
from enum import Enum
from typing import Callable, Type

from pydantic import BaseModel
from pydantic.fields import SHAPE_LIST, ModelField

from .utils import stopwatch

logger = logging.getLogger(__name__)

__all__ = ["as_arguments", "timed"]


def _option_name(field_name: str) -> str:
    return "--" + field_name.replace("_", "-")


def _add_field(parser: argparse.ArgumentParser, model_field: ModelField):
    extra = model_field.field_info.extra
    kwargs = {"help": model_field.field_info.description}
    outer = model_field.outer_type_
    if model_field.type_ is bool:
        parser.add_argument(
            _option_name(model_field.alias), dest=model_field.name, action="store_true", **kwargs
        )
        return
    if isinstance(model_field.type_, type) and issubclass(model_field.type_, Enum):
        kwargs["choices"] = [member.value for member in model_field.type_]
    if model_field.shape == SHAPE_LIST:
        kwargs["nargs"] = "*"
    if extra.get("positional"):
        parser.add_argument(model_field.name, metavar=model_field.alias, **kwargs)
        return
    # values stay strings here, pydantic converts them
    kwargs["default"] = argparse.SUPPRESS
    kwargs["metavar"] = getattr(outer, "__name__", "VALUE").upper()
    if "choices" in kwargs:
        kwargs.pop("metavar")
    parser.add_argument(_option_name(model_field.alias), dest=model_field.name, **kwargs)


def as_arguments(cls: Type[BaseModel]):
    """Gives a pydantic model ``add_arguments(parser)`` and ``from_arguments(namespace)``.

    Every field becomes an option named after it (``chunk_size`` -> ``--chunk-size``);
    fields marked ``positional=True`` become positional arguments, booleans flags.
    Unset options are left out so the model defaults and validators apply.
    """

    def add_arguments(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
        for model_field in cls.__fields__.values():
            _add_field(parser, model_field)
        return parser

    def from_arguments(namespace: argparse.Namespace) -> BaseModel:
        data = {key: value for key, value in vars(namespace).items() if key in cls.__fields__}
        return cls(**data)

    setattr(cls, "add_arguments", staticmethod(add_arguments))
    setattr(cls, "from_arguments", staticmethod(from_arguments))
    return cls


def timed(func: Callable) -> Callable:
    """Stores the wall time of the call in the ``seconds`` field of the returned record"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with stopwatch() as watch:
            result = func(*args, **kwargs)
        if hasattr(result, "seconds"):
            result.seconds = watch["seconds"]
        logger.debug("%s took %.4fs", func.__qualname__, watch["seconds"])
        return result

    return wrapper
