"""
Package containing several tools required in btplan

.. autosummary::
   :nosignatures:

   config
   misc
   output
   parameters
"""
