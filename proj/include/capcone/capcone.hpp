#pragma once

#include "capcone/linalg.hpp"
#include "capcone/dual.hpp"
#include "capcone/spectral.hpp"
#include "capcone/fd_oracle.hpp"
#include "capcone/jet.hpp"
#include "capcone/simons.hpp"
#include "capcone/stability.hpp"
#include "capcone/rigidity.hpp"
#include "capcone/sampling.hpp"
