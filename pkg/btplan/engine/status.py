"""
Results of ticking a node

.. autosummary::
   :nosignatures:

   NodeStatus
"""

import enum


class NodeStatus(str, enum.Enum):
    """status returned by every tick of every node"""

    SUCCESS = "SUCCESS"
    FAILURE = "FAILURE"
    RUNNING = "RUNNING"
    IDLE = "IDLE"
    """ reported once for a running node that is halted; never returned by a tick """

    @property
    def is_terminal(self) -> bool:
        """bool: whether the node finished its work"""
        return self != NodeStatus.RUNNING

    def inverted(self) -> "NodeStatus":
        """swap success and failure while keeping running nodes running"""
        if self == NodeStatus.SUCCESS:
            return NodeStatus.FAILURE
        elif self == NodeStatus.FAILURE:
            return NodeStatus.SUCCESS
        return self
