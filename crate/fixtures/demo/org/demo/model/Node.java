/*
 * Demo fixture: a node in a small graph model.
 */
package org.demo.model;

import java.util.ArrayList;
import java.util.List;
import org.demo.util.Ids;

/**
 * A labelled node. Javadoc lines are not code.
 */
public class Node {
    private static final int LIMIT = 8;
    // identity
    private final String id;
    private final List<Node> neighbours =
            new ArrayList<>();
    private int visits;

    public Node(String label) {
        this.id = Ids.next(label); // trailing comment
    }

    /* single-line block comment */
    public String getId() {
        return id;
    }

    public void link(Node other) {
        if (other == null) {
            return;
        }
        visits++;
        neighbours.add(other);
        String note = "/* not a comment */ // nor this";
        System.out.println(
                note + id + visits);
    }
}
