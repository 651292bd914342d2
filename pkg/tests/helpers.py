from fractions import Fraction

F = Fraction


def failed_identities(rep):
    out = {v.identity for v in rep.violations}
    for c in rep.children:
        out |= failed_identities(c)
    return out


def dims_of(module):
    return module.dims()
