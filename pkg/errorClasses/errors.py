class MembraneError(Exception):
    pass


class ConfigurationError(MembraneError, ValueError):
    """
    Bad or missing configuration value. key is the dotted config key, when known.
    """
    def __init__(self, message:str, key:str = None):
        super().__init__(message)
        self.key = key


class MaterialError(ConfigurationError):

    def __init__(self, message:str, eigenvalue:float = None, key:str = None):
        super().__init__(message, key)
        self.eigenvalue = eigenvalue


class MeshError(MembraneError, ValueError):
    pass


class MshParseError(MeshError):

    def __init__(self, message:str, line_number:int = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ElementError(MeshError):

    def __init__(self, message:str, triangle_id:int = None):
        if triangle_id is not None:
            message = f"triangle {triangle_id}: {message}"
        super().__init__(message)
        self.triangle_id = triangle_id


class AssemblyError(MembraneError, ValueError):
    pass


class NumericalError(MembraneError, ArithmeticError):
    pass


class SingularSystemError(NumericalError):
    """
    pivot_ratio is min|U_ii| / max|U_ii| of the failed LU factorization.
    """
    def __init__(self, message:str, pivot_ratio:float = None):
        if pivot_ratio is not None:
            message = f"{message} (pivot ratio {pivot_ratio:.3e})"
        super().__init__(message)
        self.pivot_ratio = pivot_ratio


class StaleFactorizationError(NumericalError):
    pass


class SubsetLookupError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass
