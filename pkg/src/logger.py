#!/usr/bin/env python3
#
# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

"""Logger module"""

import logging
import logging.config
import traceback
import sys

LIBRARY_LOGGER = 'cactus_crystals'


class Logger:
    """Logging utility class

    The configuration file is loaded with `log_file` set to `<name>.log`.
    Without a configuration file, records go to stderr so that stdout only
    carries command results.
    """

    def __init__(self, config_path, name='root'):
        try:
            logging.config.fileConfig(config_path,
                                      defaults={'log_file': f'{name}.log'},
                                      disable_existing_loggers=False)
        except (FileNotFoundError, KeyError):
            logging.basicConfig(format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                                datefmt="%Y-%m-%dT%H:%M:%S",
                                level=logging.INFO,
                                handlers=[logging.StreamHandler(sys.stderr)])
        self._logger = logging.getLogger(name)

    def set_verbose(self, verbose=True):
        """Debug level for this service and the numeric library"""
        level = logging.DEBUG if verbose else logging.INFO
        self._logger.setLevel(level)
        logging.getLogger(LIBRARY_LOGGER).setLevel(level)

    def log_message(self, log_level, msg):
        self._logger.log(log_level, msg)

    def debug(self, msg):
        self.log_message(logging.DEBUG, msg)

    def info(self, msg):
        self.log_message(logging.INFO, msg)

    def warning(self, msg):
        self.log_message(logging.WARNING, msg)

    def error(self, msg):
        self.log_message(logging.ERROR, msg)

    def critical(self, msg):
        self.log_message(logging.CRITICAL, msg)

    def traceback(self):
        self.error(traceback.format_exc())
