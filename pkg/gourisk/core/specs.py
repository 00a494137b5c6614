"""Process specs as given on the command line.

A spec is either a preset, ``{"preset": "jump_example", "c": 1, "lambda": 1}``,
or an inline triplet document read by ``levy.serializers``. Parsing returns
the triplet and its echo, the normalised document that parses back to the
same triplet.
"""
import json
import os
import sys

from levy.exceptions import SpecError
from levy.presets import continuous_example, jump_example
from levy.serializers import triplet_from_json, triplet_to_json

from .forms import CONTINUOUS_EXAMPLE, PresetForm

FIELD_NAMES = {'lam': 'lambda', '__all__': 'preset'}


def _form_error(form):
    name, errors = next(iter(form.errors.items()))
    return SpecError(FIELD_NAMES.get(name, name), errors[0])


def parse_preset(doc):
    unknown = set(doc) - {'preset', 'c', 'lambda'}
    if unknown:
        raise SpecError(sorted(unknown)[0], 'is not a preset parameter')
    data = {
        'preset': doc['preset'], 'c': doc.get('c'), 'lam': doc.get('lambda'),
    }
    form = PresetForm(data={k: v for k, v in data.items() if v is not None})
    if not form.is_valid():
        raise _form_error(form)
    c = form.cleaned_data['c']
    if form.cleaned_data['preset'] == CONTINUOUS_EXAMPLE:
        return continuous_example(c), {'preset': CONTINUOUS_EXAMPLE, 'c': c}
    lam = form.cleaned_data['lam']
    echo = {'preset': form.cleaned_data['preset'], 'c': c, 'lambda': lam}
    return jump_example(c, lam), echo


def parse_spec(doc):
    if isinstance(doc, dict) and 'preset' in doc:
        return parse_preset(doc)
    t = triplet_from_json(doc)
    return t, triplet_to_json(t)


def read_spec(source):
    """JSON document from a file name, ``-`` for stdin, or the text itself."""
    if source == '-':
        text = sys.stdin.read()
    elif os.path.isfile(source):
        with open(source, encoding='utf-8') as handle:
            text = handle.read()
    else:
        text = source
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise SpecError('', f'not a JSON document ({error.msg})')
