"""Canonical names for fundamental-category objects and generators.

These strings appear in dumped presentations, module files and boundary
rows of high-dimensional cells, so they are fixed here once.  F-words
inside a name are comma-joined in application order; dots are reserved
for joining word factors in files.
"""


def fword_text(factors):
    return ",".join(factors) if factors else "id"


def pi_object_name(fibre, cell0, phi_factors):
    base = f"{fibre}@{cell0}"
    if phi_factors:
        base += ":" + ",".join(phi_factors)
    return base


def track_name(edge_id, psi_factors, inverse=False):
    tag = "itrk" if inverse else "trk"
    return f"{tag}({edge_id};{fword_text(psi_factors)})"


def whisker_name(fgen, target_object_name):
    return f"whk({fgen};{target_object_name})"
