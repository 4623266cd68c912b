from __future__ import annotations


class LcaError(Exception):
    pass


class InventoryError(LcaError, ValueError):
    pass


class DuplicateIdError(InventoryError):
    pass


class UnknownFlowRefError(InventoryError):
    pass


class UnitMismatchError(InventoryError):
    pass


class FlowKindMismatchError(InventoryError):
    pass


class EmptyProcessSetError(InventoryError):
    pass


class InvalidProcessError(InventoryError):
    pass


class NonSquareSystemError(InventoryError):
    pass


class MultipleProducersError(InventoryError):
    pass


class AllocationError(LcaError, ValueError):
    pass


class MissingWeightError(AllocationError):
    pass


class ZeroWeightSumError(AllocationError):
    pass


class NonPositiveLifetimeError(AllocationError):
    pass


class UsageExceedsLifetimeError(AllocationError):
    pass


class InvalidShareError(AllocationError):
    pass


class ZeroProgramsError(AllocationError):
    pass


class UnsupportedKeyError(AllocationError):
    pass


class SolverError(LcaError, ArithmeticError):
    pass


class SingularSystemError(SolverError):
    pass


class ServiceModelError(LcaError, ValueError):
    pass


class UnknownDeviceError(ServiceModelError):
    pass


class UnknownGridProcessError(ServiceModelError):
    pass


class InvalidDeviceError(ServiceModelError):
    pass


class CategoryMismatchError(LcaError, ValueError):
    pass


class ScenarioFileError(LcaError, ValueError):
    pass


class ScenarioSyntaxError(ScenarioFileError):
    def __init__(self, message: str, *, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ScenarioSchemaError(ScenarioFileError):
    def __init__(self, message: str, *, path: str) -> None:
        super().__init__(f"{path or '/'}: {message}")
        self.path = path or "/"
