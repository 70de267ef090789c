# -*- coding: utf-8 -*-
#
# sknormalform documentation build configuration file.
import sys
import os

sys.path.insert(0, os.path.abspath('..'))
sys.path.insert(0, os.path.abspath('../sknormalform'))
from sknormalform import __version__  # noqa: E402

needs_sphinx = '4.0'

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.doctest',
              'sphinx.ext.intersphinx', 'sphinx.ext.todo',
              'sphinx.ext.mathjax', 'sphinx.ext.autosummary',
              'sphinx.ext.viewcode', 'sphinx.ext.napoleon',
              'sphinx_gallery.gen_gallery']

sphinx_gallery_conf = {
    'examples_dirs': ['../sknormalform/examples', ],
    'gallery_dirs': ['auto_examples', ],
    'filename_pattern': r'tutorial',
    'ignore_pattern': r'wip',
    'abort_on_example_error': False,
    'only_warn_on_example_error': True,
    'remove_config_comments': True,
}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'sknormalform'
copyright = u'2026, the sknormalform developers'

release = __version__
version = '.'.join(release.split('.')[:2])

exclude_patterns = ['_build', '**.ipynb_checkpoints']
default_role = 'any'
pygments_style = 'sphinx'

html_theme = 'alabaster'
html_short_title = "sknormalform"
htmlhelp_basename = 'sknormalformdoc'

latex_documents = [
    ('index', 'sknormalform.tex', u'sknormalform Documentation',
     u'the sknormalform developers', 'manual'),
]

man_pages = [
    ('index', 'sknormalform', u'sknormalform Documentation',
     [u'the sknormalform developers'], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}
autoclass_content = "init"
autodoc_member_order = 'bysource'
autosummary_generate = True
