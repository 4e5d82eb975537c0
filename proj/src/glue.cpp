#include "bnm/glue.hpp"

#include <stdexcept>
#include <string>

namespace bnm
{

bool slot_valid( const Bnm& b, GlueSlot slot ) noexcept
{
  return slot.node < b.size() && slot.port < 2;
}

Bnm glue( const Bnm& a, const Bnm& b, GlueSlot slot )
{
  if ( !slot_valid( b, slot ) )
  {
    throw std::invalid_argument( "invalid glue slot " + std::to_string( slot.node ) + ":" +
                                 std::to_string( slot.port ) + " for machine of size " + std::to_string( b.size() ) );
  }
  require_valid( a );
  require_valid( b );

  const auto offset = static_cast<std::uint32_t>( a.size() );
  Bnm glued;
  glued.nodes.reserve( a.size() + b.size() );
  glued.nodes.insert( glued.nodes.end(), a.nodes.begin(), a.nodes.end() );
  for ( const auto& node : b.nodes )
  {
    auto shifted = node;
    shifted.inputs[0] += offset;
    shifted.inputs[1] += offset;
    glued.nodes.push_back( shifted );
  }
  glued.nodes[offset + slot.node].inputs[slot.port] = a.output;
  glued.output = b.output + offset;
  return glued;
}

GlueSlot random_slot( const Bnm& b, RngStream& rng )
{
  if ( b.size() == 0 )
  {
    throw std::invalid_argument( "cannot pick a slot in an empty machine" );
  }
  GlueSlot slot;
  slot.node = static_cast<std::uint32_t>( rng.uniform_below( b.size() ) );
  slot.port = static_cast<std::uint32_t>( rng.uniform_below( 2 ) );
  return slot;
}

} // namespace bnm
