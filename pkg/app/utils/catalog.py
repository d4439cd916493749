from app.errors import PreconditionError

FUNCTION_CATALOG = {
    "affine": "t+s",
    "separable_sum": "t^2+sin(s)",
    "product": "t*s",
    "poly2": "t^2*s^2",
    "poly3": "t^3*s+t*s^2",
    "poly4": "t^4+t^2*s^2+t*s^3",
    "sin_exp": "sin(t)*exp(s)",
    "ts_sin": "t*s*sin(t+s)",
    "exp_sum": "exp(t+s)",
    "sin_sin": "sin(t)*sin(s)",
}

WEIGHT_CATALOG = {
    "const": "const",
    "linear": "linear",
    "quadratic": "expr:1+u^2",
}

CATALOG_PREFIX = "catalog:"


def resolve_function(text: str) -> str:
    """`catalog:<name>` -> expression text; anything else is returned as is."""
    if text.startswith(CATALOG_PREFIX):
        name = text[len(CATALOG_PREFIX):]
        if name not in FUNCTION_CATALOG:
            raise PreconditionError(f"unknown catalog function '{name}'")
        return FUNCTION_CATALOG[name]
    return text


def resolve_weight(selector: str) -> str:
    if selector.startswith(CATALOG_PREFIX):
        name = selector[len(CATALOG_PREFIX):]
        if name not in WEIGHT_CATALOG:
            raise PreconditionError(f"unknown catalog weight '{name}'")
        return WEIGHT_CATALOG[name]
    return selector
