#ifndef KIRCHLIP_KIRCHLIP_HPP
#define KIRCHLIP_KIRCHLIP_HPP

#include "kirchlip/cech.hpp"
#include "kirchlip/cexgen.hpp"
#include "kirchlip/circuits.hpp"
#include "kirchlip/cover.hpp"
#include "kirchlip/ints.hpp"
#include "kirchlip/matrix.hpp"
#include "kirchlip/newton.hpp"
#include "kirchlip/poly.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/splitter.hpp"
#include "kirchlip/window_fn.hpp"

#endif
