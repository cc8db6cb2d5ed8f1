# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited
#
# Crystals, cactus group actions and Gaudin eigenline monodromy.

SERVICE_NAME = 'ccl'
SETTINGS_FILE = 'config/ccl.toml'
SUITES_FILE = 'config/suites.yaml'
TEMPLATES_DIR = './config/templates/'
LOGGER_CONF = 'config/logger.conf'
logger = None
