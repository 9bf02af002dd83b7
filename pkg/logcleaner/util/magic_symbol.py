class MagicSymbol:
    """ A named marker that only supports the `is` operator

    Markers stand in for "no value" results where `None` or `0` would be ambiguous
    or would silently take part in arithmetic. Using a marker as a value fails loudly.

    Example:
        NaE = MagicSymbol('NaE')

        following = first_following(ex, 'check', log)
        if following is NaE:
            ...
    """
    __slots__ = ('_name',)

    def __init__(self, name: str):
        self._name = name

    def __repr__(self):
        return self._name

    def __reduce__(self):
        # Markers are singletons per name: unpickle into the module-level object
        return (_lookup, (self._name,))

    def useless(self, *args):
        raise AssertionError(
            f'You are trying to use the marker `{self!r}` as a value. '
            f'Check for it with the `is` operator: the only operator it supports.'
        )

    __lt__ = __le__ = __eq__ = __ne__ = __ge__ = __gt__ = useless  # type: ignore[assignment]
    __bool__ = __str__ = __int__ = __float__ = __index__ = useless  # type: ignore[assignment]
    __add__ = __sub__ = __mul__ = __truediv__ = __rtruediv__ = useless
    __and__ = __or__ = __rand__ = __ror__ = useless
    __hash__ = object.__hash__  # type: ignore[assignment]


# NaE: "Not an Entry". There is no first-following entry for an occurrence.
NaE = MagicSymbol('NaE')


def _lookup(name: str) -> MagicSymbol:
    return {'NaE': NaE}[name]
