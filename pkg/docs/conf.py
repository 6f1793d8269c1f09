#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# xigeo documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
sys.path.insert(0, os.path.abspath('../'))
from xigeo import version as xigeo_version

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax']

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'xigeo'
copyright = '2026, xigeo developers'
author = 'xigeo developers'

# The short X.Y version and the full version, read from the package.
version = str(xigeo_version.__version__)
release = str(xigeo_version.__version__)

language = 'en'

exclude_patterns = ['_build']

pygments_style = 'sphinx'

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"

html_static_path = []

htmlhelp_basename = 'xigeodoc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'xigeo.tex', 'xigeo Documentation', author, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'xigeo', 'xigeo Documentation', [author], 1)
]

# -- Autodoc ----------------------------------------------------------------

autodoc_mock_imports = ["scipy", "pandas"]
autodoc_default_options = {
    'members': None,
    'member-order': 'bysource',
    'special-members': '__init__',
    'exclude-members': '__weakref__'
}
