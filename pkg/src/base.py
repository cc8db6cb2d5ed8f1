#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import sys

import cactus_crystals
from cactus_crystals.errors import CactusError, InconclusiveError, UsageError
from cactus_crystals.serialize import emit
from cactus_crystals.settings import section

from logger import Logger


class Service:
    """Common class for the command line services

    `settings` is the whole TOML settings dictionary; the service sees its
    own section merged over [DEFAULT] as `self._settings`.
    """

    def __init__(self, settings, args, name):
        self._name = name
        self._logger = Logger(cactus_crystals.LOGGER_CONF, name)
        self._all_settings = settings
        self._settings = section(settings, name)
        verbose = getattr(args, 'verbose', False) or self._settings.get('verbose', False)
        if verbose:
            self._logger.set_verbose()
        cactus_crystals.logger = self._logger

    @property
    def log(self):
        return self._logger

    def _setup(self, args):
        """Set up the service

        Set up the service and return an arbitrary context object.  This will
        then be passed again in `_run()` and `_stop()`.
        """
        return args

    def _stop(self, context):
        """Release anything allocated in _setup(), which may have failed"""
        pass

    def _run(self, context):
        """Implementation method, returns a status accepted by exit_status()"""
        raise NotImplementedError("_run() needs to be implemented")

    def _emit(self, result, output=None):
        text = emit(result, output)
        if output:
            self.log.info(f"Result written to {output}")
        else:
            sys.stdout.write(text)

    def run(self, args=None):
        """Interface method to run the service

        _setup() is called first and _stop() always last.  Numeric runs that
        cannot conclude return 'inconclusive'; invalid input is re-raised as a
        usage error; any other exception results in a returned status of
        False.
        """
        status = True
        context = None

        try:
            context = self._setup(args)
            status = self._run(context)
        except KeyboardInterrupt:
            self.log.info("Stopping.")
        except UsageError:
            raise
        except InconclusiveError as exc:
            self.log.warning(f"Inconclusive: {exc} (at {exc.location})")
            status = 'inconclusive'
        except CactusError as exc:
            self.log.error(str(exc))
            status = False
        except Exception:
            self.log.traceback()
            status = False
        finally:
            self._stop(context)

        return status
