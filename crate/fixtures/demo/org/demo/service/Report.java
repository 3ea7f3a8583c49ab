package org.demo.service;

import org.demo.model.Graph;
import org.demo.util.Strings;

public class Report {
    private String title;
    private final StringBuilder body = new StringBuilder();
    private int pages;
    private int copies;

    public void setTitle(String value) {
        title = Strings.orDefault(value, "untitled");
    }

    public void append(Graph graph) {
        body.append(title).append(graph.size());
    }

    public String render() {
        return title + body;
    }

    public void addPage() {
        pages++;
    }

    public int sheets() {
        return pages * copies;
    }

    public void setCopies(int copies) {
        this.copies = copies;
    }
}
