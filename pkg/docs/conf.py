# Sphinx configuration for the PCC-Toolkit documentation.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
]

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build']
default_role = 'any'

project = 'PCC-Toolkit'
copyright = '2024, PCC-Toolkit developers'
author = 'PCC-Toolkit developers'
version = '0.1.0'
release = version

pygments_style = 'sphinx'
html_theme = 'alabaster'
html_show_sourcelink = False

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'click': ('https://click.palletsprojects.com/en/latest/', None),
    'marshmallow': ('https://marshmallow.readthedocs.io/en/latest/', None),
}
