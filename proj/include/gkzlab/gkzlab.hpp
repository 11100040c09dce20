#pragma once

#include "gkzlab/arrangement.hpp"
#include "gkzlab/continuation.hpp"
#include "gkzlab/errors.hpp"
#include "gkzlab/fuchsian.hpp"
#include "gkzlab/gkz.hpp"
#include "gkzlab/laurent.hpp"
#include "gkzlab/linalg_rational.hpp"
#include "gkzlab/matrix.hpp"
#include "gkzlab/monodromy.hpp"
#include "gkzlab/normal_form.hpp"
#include "gkzlab/perverse.hpp"
#include "gkzlab/rational.hpp"
#include "gkzlab/toric.hpp"
#include "gkzlab/version.hpp"
#include "gkzlab/windows.hpp"
#include "gkzlab/zonotope.hpp"
