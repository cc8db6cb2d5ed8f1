# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Exception hierarchy shared by the library and the services.


class CactusError(Exception):
    """Base class for every error raised by cactus_crystals"""


class SettingsError(CactusError):
    pass


class RootDataError(CactusError):
    pass


class CrystalError(CactusError):
    pass


class NonNormalCrystal(CrystalError):
    """A component with zero or several highest-weight elements"""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class SchutzenbergerError(CrystalError):
    pass


class CactusWordError(CactusError):
    pass


class ChartError(CactusError):
    pass


class ScheduleError(CactusError):
    pass


class RepresentationError(CactusError):
    pass


class FamilyError(CactusError):
    pass


class WallError(FamilyError):
    """The shift of argument element lies on a root hyperplane"""


class InconclusiveError(CactusError):
    """Numeric failure which neither confirms nor refutes a comparison"""

    def __init__(self, msg, location=None):
        super().__init__(msg)
        self.location = location


class SimpleSpectrumViolation(InconclusiveError):
    pass


class StepCollapse(InconclusiveError):
    pass


class HandoffError(InconclusiveError):
    pass


class UsageError(CactusError):
    """Invalid command line"""
