#pragma once

#include "streamshare/axioms.hpp"
#include "streamshare/claims.hpp"
#include "streamshare/errors.hpp"
#include "streamshare/game.hpp"
#include "streamshare/indices.hpp"
#include "streamshare/io.hpp"
#include "streamshare/max_flow.hpp"
#include "streamshare/problem.hpp"
#include "streamshare/rational.hpp"
