"""Exception types shared across the package."""


class PhirankError(Exception):
    pass


class RegexSyntaxError(PhirankError, ValueError):
    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class UnknownSymbolError(PhirankError, ValueError):
    def __init__(self, symbol, alphabet):
        self.symbol = symbol
        self.alphabet = alphabet
        super().__init__(f"symbol {symbol!r} is not in alphabet {''.join(alphabet)!r}")


class AlphabetMismatchError(PhirankError, ValueError):
    pass


class ResourceLimitError(PhirankError):
    """Some intermediate object grew past a configured bound."""

    def __init__(self, what, limit):
        self.what = what
        self.limit = limit
        super().__init__(f"{what} exceeded the limit of {limit}")


class StateLimitError(ResourceLimitError):
    pass


class MonoidLimitError(ResourceLimitError):
    pass


class ProbeLimitError(ResourceLimitError):
    pass


class UnseparatedPairError(PhirankError):
    def __init__(self, first, second, max_suffix_len):
        self.pair = (first, second)
        self.max_suffix_len = max_suffix_len
        super().__init__(
            f"no suffix of length <= {max_suffix_len} separates "
            f"{first or '_'!r} and {second or '_'!r}"
        )
