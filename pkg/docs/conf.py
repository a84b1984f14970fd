import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = 'halgeo'
copyright = '2024, the halgeo authors'
author = 'the halgeo authors'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinxcontrib.jquery',
]
autodoc_typehints = "both"

intersphinx_mapping = {
    'python': (
        'https://docs.python.org/3',
        None,
    ),
    'numpy': (
        'https://numpy.org/doc/stable/',
        None,
    ),
    'click': (
        'https://click.palletsprojects.com/en/8.1.x/',
        None,
    ),
}

templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

html_static_path = ['_static']
html_theme = 'sphinx_rtd_theme'
