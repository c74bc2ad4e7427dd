#pragma once

#include "voidgeom/errors.hpp"
#include "voidgeom/specfun.hpp"
#include "voidgeom/quadrature.hpp"
#include "voidgeom/gamma_model.hpp"
#include "voidgeom/void_diameter.hpp"
#include "voidgeom/info_geometry.hpp"
#include "voidgeom/io.hpp"
