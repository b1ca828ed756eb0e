#pragma once

#include "hedgecone/artifacts.hpp"
#include "hedgecone/buyer.hpp"
#include "hedgecone/deferred.hpp"
#include "hedgecone/european.hpp"
#include "hedgecone/json_io.hpp"
#include "hedgecone/korn_muller.hpp"
#include "hedgecone/market.hpp"
#include "hedgecone/model.hpp"
#include "hedgecone/oracle.hpp"
#include "hedgecone/polyhedron.hpp"
#include "hedgecone/seller.hpp"
#include "hedgecone/stopping.hpp"
