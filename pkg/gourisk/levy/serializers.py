import math

import numpy as np

from .densities import build_family
from .exceptions import SpecError
from .triplets import AtomMeasure, DensityMeasure, JumpAtom, LevyTriplet2D


def _pair(value, field, size=2):
    if not isinstance(value, (list, tuple)) or len(value) != size:
        raise SpecError(field, f'expects a list of {size} numbers')
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise SpecError(field, 'expects numbers')


def _atoms_from_json(items):
    if not isinstance(items, list):
        raise SpecError('jumps.atoms', 'expects a list')
    atoms = []
    for index, item in enumerate(items):
        prefix = f'jumps.atoms[{index}]'
        if not isinstance(item, dict):
            raise SpecError(prefix, 'expects {"x", "y", "rate"}')
        missing = [key for key in ('x', 'y', 'rate') if key not in item]
        if missing:
            raise SpecError(f'{prefix}.{missing[0]}', 'is required')
        try:
            atoms.append(JumpAtom(item['x'], item['y'], item['rate']))
        except SpecError as error:
            raise SpecError(f'{prefix}.{error.field}', error.message)
        except (TypeError, ValueError):
            raise SpecError(prefix, 'x, y and rate must be numbers')
    return AtomMeasure(tuple(atoms))


def _density_from_json(doc):
    if not isinstance(doc, dict) or 'kind' not in doc:
        raise SpecError('jumps.density.kind', 'is required')
    box = _pair(doc.get('box'), 'jumps.density.box', 4)
    family = build_family(doc['kind'], doc.get('params'), box)
    if 'tol' in doc:
        return DensityMeasure(family, doc['tol'])
    return DensityMeasure(family)


def check_levy_integrability(measure):
    """∫ min(|z|², 1) Π(dz) must be finite."""
    value = measure.integrate(lambda x, y: np.minimum(x * x + y * y, 1.0))
    if math.isinf(value):
        raise SpecError('jumps.density', 'does not integrate min(|z|², 1)')
    return value


def triplet_from_json(doc):
    if not isinstance(doc, dict):
        raise SpecError('', 'expects a JSON object')
    gamma = _pair(doc.get('gamma_tilde', [0.0, 0.0]), 'gamma_tilde')
    sigma = doc.get('sigma', [[0.0, 0.0], [0.0, 0.0]])
    if not isinstance(sigma, (list, tuple)) or len(sigma) != 2:
        raise SpecError('sigma', 'expects a 2×2 matrix')
    sigma = (_pair(sigma[0], 'sigma[0]'), _pair(sigma[1], 'sigma[1]'))
    jumps_doc = doc.get('jumps') or {}
    if not isinstance(jumps_doc, dict):
        raise SpecError('jumps', 'expects an object with atoms or density')
    if 'atoms' in jumps_doc and 'density' in jumps_doc:
        raise SpecError('jumps', 'give either atoms or a density, not both')
    if 'density' in jumps_doc:
        jumps = _density_from_json(jumps_doc['density'])
        check_levy_integrability(jumps)
    else:
        jumps = _atoms_from_json(jumps_doc.get('atoms', []))
    return LevyTriplet2D(gamma, sigma, jumps)


def triplet_to_json(t):
    doc = {
        'gamma_tilde': list(t.gamma_tilde),
        'sigma': [list(row) for row in t.sigma],
    }
    if t.is_atomic:
        doc['jumps'] = {'atoms': [
            {'x': atom.x, 'y': atom.y, 'rate': atom.rate}
            for atom in t.jumps.atoms
        ]}
        return doc
    if t.jumps.is_transformed:
        raise SpecError(
            'jumps.density', 'a transformed density has no JSON form'
        )
    density = t.jumps.family.to_json()
    density['tol'] = t.jumps.tol
    doc['jumps'] = {'density': density}
    return doc
