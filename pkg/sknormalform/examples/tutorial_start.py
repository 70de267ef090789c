"""
Starting tutorial
=================
"""

# %%  [rst]
# First we import sknormalform. For reproducibility we should always print
# out the version of sknormalform.

import sknormalform
from sknormalform.map_io import load_example_map
from sknormalform.nilpotent_algebra import NilpotentSpec, build_sl2_triple
from sknormalform.normalizer import normalize, render_versal, versal_deformation
from sknormalform.polynomial_maps import format_poly
from sknormalform.sl2_action import kernel_basis
from sknormalform.genfun import cushman_sanders_check, empirical_gf
from sknormalform.transvectants import describe_irreducible_nf, render_families
sknormalform.__version__

# %%
# The sl2-triple of a nilpotent matrix
# ------------------------------------
# A nilpotent linear part is described by its Jordan block sizes. Each block
# has ones on the superdiagonal. From it we build the matrices h and m which
# complete n to an sl2-triple. The relations are checked on construction,
# the report shows them again.

spec = NilpotentSpec((2, 3))
triple = build_sl2_triple(spec)
print(triple.h_bar)
print(triple.check().render())

# %%
# The normal form style
# ---------------------
# The nonlinear terms that survive normalization lie in the kernel of the
# lifted m-operator. On every homogeneous slice the kernel has a canonical
# basis of weight vectors. For one block of size two at degree two there are
# three of them.

for wv in kernel_basis(NilpotentSpec((2, )), 2).vectors:
    print(wv.weight, format_poly(wv.element))

# %%
# The weights are not arbitrary, summing weight + 1 over the basis gives the
# dimension of the slice. This is the Cushman-Sanders test.

print(cushman_sanders_check(spec, 3).render())

# %%
# Normalizing a map
# -----------------
# `load_example_map` gives us the spec and the map of one of the bundled
# examples. `normalize` returns the normal form up to the requested degree
# together with the coordinate change which produces it.

spec2, f = load_example_map('quad2d')
print(format_poly(f))
result = normalize(f, spec2, 3)
print(result.render())

# %%
# The result can check itself: conjugating the map with the generator gives
# back the normal form.

print(result.check_conjugation().render())

# %%
# Generating functions
# --------------------
# Counting kernel basis elements by degree (power of t) and weight (power of
# u) gives a generating function.

print(empirical_gf(spec, 3).render())

# %%
# A single Jordan block
# ---------------------
# For one block the normal form is known in closed form. Every family is
# a sum of terms in an arbitrary function F of a range of variables.

print(render_families(describe_irreducible_nf(3)))

# %%
# The linear versal deformation
# -----------------------------
# The kernel at degree one parametrizes the nearby linear parts.

print(render_versal(versal_deformation(NilpotentSpec((2, 2)))))
