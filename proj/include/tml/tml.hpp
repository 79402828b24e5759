#pragma once

#include "tml/formula.hpp"
#include "tml/parse.hpp"
#include "tml/sequent.hpp"
#include "tml/matrix.hpp"
#include "tml/algebra.hpp"
#include "tml/signed.hpp"
#include "tml/two_sided.hpp"
#include "tml/sc.hpp"
#include "tml/sc_transform.hpp"
#include "tml/g.hpp"
#include "tml/nd.hpp"
#include "tml/nd_translate.hpp"
