#pragma once

#include "qnetcap/chain.hpp"
#include "qnetcap/channel.hpp"
#include "qnetcap/multiuser.hpp"
#include "qnetcap/network.hpp"
#include "qnetcap/report.hpp"
#include "qnetcap/routing.hpp"
