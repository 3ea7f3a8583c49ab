package org.demo.model;

import java.util.ArrayList;
import java.util.List;

public class Graph {
    private final List<Node> nodes = new ArrayList<>();
    private final List<Edge> edges = new ArrayList<>();

    public Node addNode(String label) {
        Node node = new Node(label);
        nodes.add(node);
        return node;
    }

    public Edge connect(Node a, Node b) {
        Edge edge = new Edge(a, b);
        a.link(b);
        edges.add(edge);
        return edge;
    }

    public int size() {
        return nodes.size() + edges.size();
    }

    public Graph copy() {
        Graph other = new Graph();
        other.nodes.addAll(nodes);
        return other;
    }
}
