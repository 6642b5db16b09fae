#pragma once

#include "spinflip/asymptotics.hpp"
#include "spinflip/config.hpp"
#include "spinflip/constants.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/layered_green.hpp"
#include "spinflip/quadrature.hpp"
#include "spinflip/quantities.hpp"
#include "spinflip/spin_flip.hpp"
#include "spinflip/sweep.hpp"
#include "spinflip/table_io.hpp"
