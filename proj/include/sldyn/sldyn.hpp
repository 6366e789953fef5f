#pragma once

#include "sldyn/error.hpp"
#include "sldyn/opinion.hpp"
#include "sldyn/evidence.hpp"
#include "sldyn/fusion.hpp"
#include "sldyn/trust.hpp"
#include "sldyn/dynamics.hpp"
#include "sldyn/io.hpp"
